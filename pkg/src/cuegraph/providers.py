"""Language-model backends: recorded replay, scripted queues, and live HTTP.

Replay fixtures key responses by a hash of the normalized prompt so that
recorded sessions stay reproducible byte for byte.  The live backend speaks
the common chat-completions shape and is rate limited client side.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

logger = logging.getLogger(__name__)

FIXTURE_SCHEMA_VERSION = 1
DEFAULT_TEMPERATURE = 0.7
DEFAULT_MAX_TOKENS = 1024
API_KEY_ENV = "CUEGRAPH_API_KEY"
API_BASE_ENV = "CUEGRAPH_API_BASE"
MODEL_ENV = "CUEGRAPH_MODEL"


class ProviderError(RuntimeError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def normalize_prompt(prompt: str) -> str:
    # Whitespace-insensitive, case-preserving: rewording is a different prompt.
    return " ".join(prompt.split())


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(normalize_prompt(prompt).encode("utf-8")).hexdigest()


class Provider(Protocol):
    name: str

    def complete(self, prompt: str) -> str: ...


@dataclass
class ReplayProvider:
    """Serves responses recorded under the hash of each normalized prompt."""

    records: dict[str, str]
    name: str = "replay"

    def complete(self, prompt: str) -> str:
        key = prompt_key(prompt)
        try:
            return self.records[key]
        except KeyError:
            raise ProviderError(
                "replay-miss",
                f"no recorded response for prompt hash {key}",
            ) from None

    @classmethod
    def from_path(cls, path: str | Path) -> ReplayProvider:
        try:
            payload = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProviderError("bad-fixture", f"cannot load fixture {path}: {exc}") from exc
        if payload.get("schema_version") != FIXTURE_SCHEMA_VERSION:
            raise ProviderError(
                "bad-fixture", f"fixture {path} has unsupported schema_version"
            )
        records = {}
        for record in payload.get("records", []):
            records[record["key"]] = record["response"]
        return cls(records=records)


@dataclass
class ScriptedProvider:
    """Hands out canned responses in order, no matter the prompt."""

    responses: deque[str]
    name: str = "scripted"

    def __init__(self, responses: list[str] | tuple[str, ...]):
        self.responses = deque(responses)
        self.name = "scripted"

    def complete(self, prompt: str) -> str:
        if not self.responses:
            raise ProviderError("queue-exhausted", "scripted response queue is empty")
        return self.responses.popleft()

    @classmethod
    def from_path(cls, path: str | Path) -> ScriptedProvider:
        try:
            payload = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProviderError("bad-fixture", f"cannot load script {path}: {exc}") from exc
        responses = payload["responses"] if isinstance(payload, dict) else payload
        return cls(list(responses))


class RateLimiter:
    """Token bucket; acquire() blocks until a request slot frees up."""

    def __init__(self, rate_per_minute: int = 30, clock=time.monotonic, sleep=time.sleep):
        self.capacity = max(1, rate_per_minute)
        self.tokens = float(self.capacity)
        self.fill_rate = self.capacity / 60.0
        self._clock = clock
        self._sleep = sleep
        self._last = clock()

    def acquire(self) -> None:
        while True:
            now = self._clock()
            self.tokens = min(self.capacity, self.tokens + (now - self._last) * self.fill_rate)
            self._last = now
            if self.tokens >= 1.0:
                self.tokens -= 1.0
                return
            self._sleep((1.0 - self.tokens) / self.fill_rate)


@dataclass
class LiveProvider:
    """Chat-completions HTTP backend with bounded, jittered retries."""

    api_base: str
    model: str
    api_key: str = field(repr=False, default="")
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    timeout: float = 60.0
    max_attempts: int = 3
    name: str = "live"
    rate_limiter: RateLimiter = field(default_factory=RateLimiter)

    @classmethod
    def from_env(cls) -> LiveProvider:
        api_key = os.environ.get(API_KEY_ENV, "")
        api_base = os.environ.get(API_BASE_ENV, "")
        model = os.environ.get(MODEL_ENV, "")
        if not api_key or not api_base or not model:
            raise ProviderError(
                "missing-config",
                f"live provider needs {API_KEY_ENV}, {API_BASE_ENV} and {MODEL_ENV}",
            )
        return cls(api_base=api_base, model=model, api_key=api_key)

    def complete(self, prompt: str) -> str:
        import requests

        url = self.api_base.rstrip("/") + "/chat/completions"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            self.rate_limiter.acquire()
            try:
                response = requests.post(url, json=body, headers=headers, timeout=self.timeout)
                if response.status_code in (429, 500, 502, 503, 504):
                    raise ProviderError(
                        "upstream-error", f"model endpoint returned {response.status_code}"
                    )
                response.raise_for_status()
                payload = response.json()
                return payload["choices"][0]["message"]["content"]
            except (requests.RequestException, ProviderError, KeyError, IndexError) as exc:
                last_error = exc
                logger.warning("live completion attempt %d failed: %s", attempt, exc)
                if attempt < self.max_attempts:
                    time.sleep(min(8.0, 0.5 * 2**attempt) * (0.5 + random.random() / 2))
        raise ProviderError(
            "live-failed", f"live completion failed after {self.max_attempts} attempts: {last_error}"
        )


@dataclass
class RecordingProvider:
    """Wraps another provider and captures its answers as a replay fixture."""

    inner: Provider
    records: list[dict[str, str]] = field(default_factory=list)

    @property
    def name(self) -> str:
        return f"recording({self.inner.name})"

    def complete(self, prompt: str) -> str:
        response = self.inner.complete(prompt)
        self.records.append(
            {
                "key": prompt_key(prompt),
                "response": response,
                "metadata": {"prompt": normalize_prompt(prompt)},
            }
        )
        return response

    def write_fixture(self, path: str | Path) -> None:
        payload = {"schema_version": FIXTURE_SCHEMA_VERSION, "records": self.records}
        Path(path).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", "utf-8"
        )


def build_fixture(pairs: list[tuple[str, str]]) -> dict:
    """Assemble a replay fixture document from (prompt, response) pairs."""
    records = [
        {
            "key": prompt_key(prompt),
            "response": response,
            "metadata": {"prompt": normalize_prompt(prompt)},
        }
        for prompt, response in pairs
    ]
    return {"schema_version": FIXTURE_SCHEMA_VERSION, "records": records}
