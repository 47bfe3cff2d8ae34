"""Iterative cue-exploration sessions over a working paragraph.

A session asks for a critique of the paragraph, triages the resulting cues,
opens exploration threads on the interesting ones, deepens each thread with
follow-up questions, optionally fuses two explored cues into a convergence
question, and ends with a rewrite or an explicit stop.

Everything is deterministic: identifiers are dense counters, timestamps are
logical ticks, and a session exports to JSON that replays and round-trips
byte for byte.
"""
from __future__ import annotations

import json
import logging
import random as _random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Protocol

from .prompts import (
    COMBINATION_KINDS,
    DETAILING_KINDS,
    PromptError,
    TemplateCatalog,
    TemplateKind,
    extract_cues,
    instantiate,
    score_against,
)
from .providers import Provider

logger = logging.getLogger(__name__)

EXPORT_SCHEMA_VERSION = 1


class SessionState(str, Enum):
    AWAITING_CRITIQUE = "awaiting_critique"
    TRIAGE_PENDING = "triage_pending"
    THREAD_OPEN = "thread_open"
    REWRITE_PENDING = "rewrite_pending"
    DONE = "done"


class TriageCategory(str, Enum):
    EXPLORE = "explore"
    EVALUATE = "evaluate"
    IGNORE = "ignore"


# Which author decisions each state accepts.  Response ingestion is not a
# decision; it is legal in every state except DONE.
ALLOWED_ACTIONS: dict[SessionState, frozenset[str]] = {
    SessionState.AWAITING_CRITIQUE: frozenset({"terminate"}),
    SessionState.TRIAGE_PENDING: frozenset({"triage", "select_thread", "terminate"}),
    SessionState.THREAD_OPEN: frozenset(
        {"request_detailing", "select_cues", "combine", "select_thread", "rewrite", "terminate"}
    ),
    SessionState.REWRITE_PENDING: frozenset({"rewrite", "terminate"}),
    SessionState.DONE: frozenset(),
}

DECISION_ACTIONS = frozenset(
    {"triage", "select_thread", "request_detailing", "select_cues", "combine", "rewrite", "terminate"}
)


class EngineError(RuntimeError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Prompt:
    id: str
    ordinal: int
    kind: TemplateKind
    text: str
    thread_id: str | None = None
    answered: bool = False
    response_id: str | None = None


@dataclass
class Response:
    id: str
    prompt_id: str
    text: str
    broad_statement: str
    summary: str
    cue_ids: list[str] = field(default_factory=list)


@dataclass
class Cue:
    id: str
    label: str
    body: str
    response_id: str
    prompt_ordinal: int
    item_index: int
    triage: TriageCategory | None = None
    triage_seq: int | None = None
    thread_id: str | None = None
    selected_in: str | None = None

    @property
    def text(self) -> str:
        return f"{self.label} {self.body}".strip()


@dataclass
class Thread:
    id: str
    root_cue_id: str
    status: str = "open"
    prompt_ids: list[str] = field(default_factory=list)
    selected_cue_ids: list[str] = field(default_factory=list)


class ExplorationSession:
    def __init__(
        self,
        session_id: str,
        paragraph: str,
        client: str = "anonymous",
        catalog: TemplateCatalog | None = None,
    ):
        paragraph = paragraph.strip()
        if not paragraph:
            raise EngineError("bad-paragraph", "paragraph text is empty")
        self.id = session_id
        self.client = client
        self.catalog = catalog or TemplateCatalog.default()
        self.state = SessionState.AWAITING_CRITIQUE
        self.revisions: list[dict[str, Any]] = [{"revision": 0, "paragraph": paragraph}]
        self.prompts: list[Prompt] = []
        self.responses: list[Response] = []
        self.cues: dict[str, Cue] = {}
        self.cue_order: list[str] = []
        self.threads: list[Thread] = []
        self.annotations: dict[int, str] = {}
        self.events: list[dict[str, Any]] = []
        self._triage_counter = 0
        self._event("session_created", {"session_id": self.id, "client": client})

    # -- bookkeeping -------------------------------------------------------

    @property
    def paragraph(self) -> str:
        return self.revisions[-1]["paragraph"]

    def _event(self, action: str, data: dict[str, Any]) -> None:
        seq = len(self.events)
        self.events.append({"seq": seq, "tick": seq, "action": action, "data": data})

    def _check(self, action: str) -> None:
        if action not in ALLOWED_ACTIONS[self.state]:
            raise EngineError(
                "not-allowed",
                f"action {action!r} is not allowed in state {self.state.value!r}",
            )

    def _prompt(self, prompt_id: str) -> Prompt:
        for prompt in self.prompts:
            if prompt.id == prompt_id:
                return prompt
        raise EngineError("unknown-prompt", f"no prompt {prompt_id!r}")

    def _thread(self, thread_id: str) -> Thread:
        for thread in self.threads:
            if thread.id == thread_id:
                return thread
        raise EngineError("unknown-thread", f"no thread {thread_id!r}")

    def _cue(self, cue_id: str) -> Cue:
        try:
            return self.cues[cue_id]
        except KeyError:
            raise EngineError("unknown-cue", f"no cue {cue_id!r}") from None

    def _new_prompt(self, kind: TemplateKind, text: str, thread_id: str | None) -> Prompt:
        prompt = Prompt(
            id=f"p{len(self.prompts) + 1}",
            ordinal=len(self.prompts) + 1,
            kind=kind,
            text=text,
            thread_id=thread_id,
        )
        self.prompts.append(prompt)
        self._event(
            "prompt_issued",
            {"prompt_id": prompt.id, "kind": kind.value, "thread_id": thread_id},
        )
        return prompt

    def unanswered_prompts(self) -> list[Prompt]:
        return [p for p in self.prompts if not p.answered]

    def root_cues(self) -> list[Cue]:
        return [self.cues[cid] for cid in self.cue_order if self.cues[cid].prompt_ordinal == 1]

    def cues_by_category(self, category: TriageCategory) -> list[Cue]:
        return [c for c in (self.cues[cid] for cid in self.cue_order) if c.triage is category]

    def explored_texts(self) -> list[str]:
        """Texts the author has engaged with: thread roots, selected cues,
        and the free-text subjects of detailing prompts."""
        texts: list[str] = []
        for thread in self.threads:
            texts.append(self.cues[thread.root_cue_id].text)
            for cue_id in thread.selected_cue_ids:
                texts.append(self.cues[cue_id].text)
        for event in self.events:
            if event["action"] == "request_detailing":
                texts.append(event["data"]["cue_text"])
        return texts

    # -- prompting and responses -------------------------------------------

    def request_critique(self) -> Prompt:
        if self.state is not SessionState.AWAITING_CRITIQUE:
            raise EngineError("not-allowed", "critique was already requested")
        if self.prompts:
            raise EngineError("critique-already-requested", "critique prompt already exists")
        text = instantiate(TemplateKind.CRITIQUE, {"Paragraph": self.paragraph}, self.catalog)
        return self._new_prompt(TemplateKind.CRITIQUE, text, None)

    def ingest_response(self, prompt_id: str, text: str) -> Response:
        if self.state is SessionState.DONE:
            raise EngineError("not-allowed", "session is finished")
        prompt = self._prompt(prompt_id)
        if prompt.answered:
            raise EngineError("already-answered", f"prompt {prompt_id!r} already has a response")
        parsed = extract_cues(text)
        response = Response(
            id=f"r{len(self.responses) + 1}",
            prompt_id=prompt.id,
            text=text,
            broad_statement=parsed.broad_statement,
            summary=parsed.summary,
        )
        self.responses.append(response)
        prompt.answered = True
        prompt.response_id = response.id
        for index, item in enumerate(parsed.items, start=1):
            cue = Cue(
                id=f"PROMPT{prompt.ordinal}.{index}",
                label=item.label,
                body=item.body,
                response_id=response.id,
                prompt_ordinal=prompt.ordinal,
                item_index=index,
            )
            self.cues[cue.id] = cue
            self.cue_order.append(cue.id)
            response.cue_ids.append(cue.id)
        self._event(
            "response_ingested",
            {"response_id": response.id, "prompt_id": prompt.id, "cue_ids": list(response.cue_ids)},
        )
        if prompt.kind is TemplateKind.CRITIQUE and self.state is SessionState.AWAITING_CRITIQUE:
            self.state = SessionState.TRIAGE_PENDING
        return response

    # -- author decisions ----------------------------------------------------

    def triage(self, cue_id: str, category: TriageCategory | str) -> Cue:
        self._check("triage")
        try:
            category = TriageCategory(category)
        except ValueError:
            raise EngineError("bad-category", f"unknown triage category {category!r}") from None
        cue = self._cue(cue_id)
        if any(t.root_cue_id == cue.id for t in self.threads):
            raise EngineError("locked-cue", f"cue {cue_id!r} already roots a thread")
        cue.triage = category
        cue.triage_seq = self._triage_counter
        self._triage_counter += 1
        self._event("triage", {"cue_id": cue.id, "category": category.value})
        self._maybe_enter_rewrite_pending()
        return cue

    def _maybe_enter_rewrite_pending(self) -> None:
        # Nothing left to explore right after triage: skip straight to rewrite.
        if self.state is not SessionState.TRIAGE_PENDING:
            return
        roots = self.root_cues()
        if not roots or any(c.triage is None for c in roots):
            return
        if not any(c.triage is TriageCategory.EXPLORE for c in roots):
            self.state = SessionState.REWRITE_PENDING
            self._event("auto_rewrite_pending", {})

    def select_next_thread(self) -> Thread:
        self._check("select_thread")
        roots = self.root_cues()
        if any(c.triage is None for c in roots):
            raise EngineError("triage-incomplete", "triage every critique cue first")
        candidates = [
            c for c in roots if c.triage is TriageCategory.EXPLORE and c.thread_id is None
        ]
        if not candidates:
            raise EngineError("no-explore-cues", "no explore cue is left without a thread")
        evaluation = [c.text for c in self.cues_by_category(TriageCategory.EVALUATE)]
        if evaluation:
            scores = {
                c.id: score_against([(c.id, c.text)], evaluation)[0].score for c in candidates
            }
            candidates.sort(key=lambda c: (-scores[c.id], c.triage_seq))
        else:
            candidates.sort(key=lambda c: c.triage_seq)
        root = candidates[0]
        thread = Thread(id=f"t{len(self.threads) + 1}", root_cue_id=root.id)
        self.threads.append(thread)
        root.thread_id = thread.id
        if self.state is SessionState.TRIAGE_PENDING:
            self.state = SessionState.THREAD_OPEN
        self._event("select_thread", {"thread_id": thread.id, "root_cue_id": root.id})
        return thread

    def request_detailing(
        self, thread_id: str, kind: TemplateKind | str, cue_text: str | None = None
    ) -> Prompt:
        self._check("request_detailing")
        thread = self._thread(thread_id)
        if thread.status != "open":
            raise EngineError("thread-closed", f"thread {thread_id!r} is closed")
        try:
            kind = TemplateKind(kind)
        except ValueError:
            raise EngineError("bad-kind", f"unknown detailing kind {kind!r}") from None
        if kind not in DETAILING_KINDS:
            raise EngineError("bad-kind", f"{kind.value!r} is not a detailing kind")
        if cue_text is None:
            cue_text = self.cues[thread.root_cue_id].label
        text = instantiate(
            kind, {"Paragraph": self.paragraph, "Selected_Cue": cue_text}, self.catalog
        )
        prompt = self._new_prompt(kind, text, thread.id)
        thread.prompt_ids.append(prompt.id)
        self._event(
            "request_detailing",
            {
                "thread_id": thread.id,
                "kind": kind.value,
                "cue_text": cue_text,
                "prompt_id": prompt.id,
            },
        )
        return prompt

    def select_cues(self, thread_id: str, cue_ids: Iterable[str]) -> list[Cue]:
        self._check("select_cues")
        thread = self._thread(thread_id)
        selected: list[Cue] = []
        for cue_id in cue_ids:
            cue = self._cue(cue_id)
            if cue.selected_in is not None:
                raise EngineError("already-selected", f"cue {cue_id!r} was already selected")
            response = next(r for r in self.responses if r.id == cue.response_id)
            prompt = self._prompt(response.prompt_id)
            # Convergence questions belong to no single thread, so any open
            # thread may claim their cues.
            if prompt.id not in thread.prompt_ids and prompt.kind not in COMBINATION_KINDS:
                raise EngineError(
                    "cue-not-in-thread",
                    f"cue {cue_id!r} did not come from a prompt of thread {thread_id!r}",
                )
            cue.selected_in = thread.id
            thread.selected_cue_ids.append(cue.id)
            selected.append(cue)
        self._event(
            "select_cues", {"thread_id": thread.id, "cue_ids": [c.id for c in selected]}
        )
        return selected

    def combine(self, cue_a_id: str, cue_b_id: str, kind: TemplateKind | str) -> Prompt:
        self._check("combine")
        try:
            kind = TemplateKind(kind)
        except ValueError:
            raise EngineError("bad-kind", f"unknown combination kind {kind!r}") from None
        if kind not in COMBINATION_KINDS:
            raise EngineError("bad-kind", f"{kind.value!r} is not a combination kind")
        if cue_a_id == cue_b_id:
            raise EngineError("same-cue", "combination needs two distinct cues")
        cue_a = self._cue(cue_a_id)
        cue_b = self._cue(cue_b_id)
        for cue in (cue_a, cue_b):
            if cue.selected_in is None and cue.thread_id is None:
                raise EngineError(
                    "cue-not-selected", f"cue {cue.id!r} was never explored by a thread"
                )
        template = self.catalog.get(kind)
        slots = template.slots
        values = {slots[0]: cue_a.label, slots[1]: cue_b.label}
        text = instantiate(kind, values, self.catalog)
        prompt = self._new_prompt(kind, text, None)
        self._event(
            "combine",
            {"cue_a": cue_a.id, "cue_b": cue_b.id, "kind": kind.value, "prompt_id": prompt.id},
        )
        return prompt

    def rewrite(self, paragraph: str) -> dict[str, Any]:
        self._check("rewrite")
        if self.unanswered_prompts():
            raise EngineError(
                "pending-prompts", "cannot rewrite while prompts are awaiting responses"
            )
        paragraph = paragraph.strip()
        if not paragraph:
            raise EngineError("bad-paragraph", "rewritten paragraph is empty")
        revision = {"revision": len(self.revisions), "paragraph": paragraph}
        self.revisions.append(revision)
        self.state = SessionState.DONE
        self._event("rewrite", {"revision": revision["revision"], "paragraph": paragraph})
        return revision

    def terminate(self) -> None:
        if self.state is SessionState.DONE:
            raise EngineError("not-allowed", "session is already finished")
        self.state = SessionState.DONE
        self._event("terminate", {})

    def attach_annotation(self, revision: int, text: str) -> None:
        from .annotation import parse_annotation

        if not 0 <= revision < len(self.revisions):
            raise EngineError("unknown-revision", f"session has no revision {revision}")
        parse_annotation(text)  # reject malformed markup before storing
        self.annotations[revision] = text
        self._event("annotation_attached", {"revision": revision})

    # -- serialization -------------------------------------------------------

    def to_document(self) -> dict[str, Any]:
        return {
            "schema_version": EXPORT_SCHEMA_VERSION,
            "session": {
                "id": self.id,
                "client": self.client,
                "state": self.state.value,
                "revisions": [dict(r) for r in self.revisions],
                "prompts": [
                    {
                        "id": p.id,
                        "ordinal": p.ordinal,
                        "kind": p.kind.value,
                        "thread_id": p.thread_id,
                        "text": p.text,
                        "answered": p.answered,
                        "response_id": p.response_id,
                    }
                    for p in self.prompts
                ],
                "responses": [
                    {
                        "id": r.id,
                        "prompt_id": r.prompt_id,
                        "text": r.text,
                        "broad_statement": r.broad_statement,
                        "summary": r.summary,
                        "cue_ids": list(r.cue_ids),
                    }
                    for r in self.responses
                ],
                "cues": [
                    {
                        "id": c.id,
                        "label": c.label,
                        "body": c.body,
                        "response_id": c.response_id,
                        "prompt_ordinal": c.prompt_ordinal,
                        "item_index": c.item_index,
                        "triage": c.triage.value if c.triage else None,
                        "triage_seq": c.triage_seq,
                        "thread_id": c.thread_id,
                        "selected_in": c.selected_in,
                    }
                    for c in (self.cues[cid] for cid in self.cue_order)
                ],
                "threads": [
                    {
                        "id": t.id,
                        "root_cue_id": t.root_cue_id,
                        "status": t.status,
                        "prompt_ids": list(t.prompt_ids),
                        "selected_cue_ids": list(t.selected_cue_ids),
                    }
                    for t in self.threads
                ],
                "annotations": {str(k): v for k, v in sorted(self.annotations.items())},
                "events": [dict(e) for e in self.events],
            },
        }

    def export_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, ensure_ascii=False) + "\n"

    def trace_document(self) -> dict[str, Any]:
        """The replayable decisions alone, suitable for the replay policy."""
        return {
            "schema_version": EXPORT_SCHEMA_VERSION,
            "events": [
                {"action": e["action"], "data": dict(e["data"])}
                for e in self.events
                if e["action"] in DECISION_ACTIONS
            ],
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> ExplorationSession:
        if doc.get("schema_version") != EXPORT_SCHEMA_VERSION:
            raise EngineError("bad-document", "unsupported session schema_version")
        data = doc["session"]
        session = cls.__new__(cls)
        session.id = data["id"]
        session.client = data["client"]
        session.catalog = TemplateCatalog.default()
        session.state = SessionState(data["state"])
        session.revisions = [dict(r) for r in data["revisions"]]
        session.prompts = [
            Prompt(
                id=p["id"],
                ordinal=p["ordinal"],
                kind=TemplateKind(p["kind"]),
                text=p["text"],
                thread_id=p["thread_id"],
                answered=p["answered"],
                response_id=p["response_id"],
            )
            for p in data["prompts"]
        ]
        session.responses = [
            Response(
                id=r["id"],
                prompt_id=r["prompt_id"],
                text=r["text"],
                broad_statement=r["broad_statement"],
                summary=r["summary"],
                cue_ids=list(r["cue_ids"]),
            )
            for r in data["responses"]
        ]
        session.cues = {}
        session.cue_order = []
        for c in data["cues"]:
            cue = Cue(
                id=c["id"],
                label=c["label"],
                body=c["body"],
                response_id=c["response_id"],
                prompt_ordinal=c["prompt_ordinal"],
                item_index=c["item_index"],
                triage=TriageCategory(c["triage"]) if c["triage"] else None,
                triage_seq=c["triage_seq"],
                thread_id=c["thread_id"],
                selected_in=c["selected_in"],
            )
            session.cues[cue.id] = cue
            session.cue_order.append(cue.id)
        session.threads = [
            Thread(
                id=t["id"],
                root_cue_id=t["root_cue_id"],
                status=t["status"],
                prompt_ids=list(t["prompt_ids"]),
                selected_cue_ids=list(t["selected_cue_ids"]),
            )
            for t in data["threads"]
        ]
        session.annotations = {int(k): v for k, v in data.get("annotations", {}).items()}
        session.events = [dict(e) for e in data["events"]]
        session._triage_counter = (
            max((c.triage_seq for c in session.cues.values() if c.triage_seq is not None), default=-1)
            + 1
        )
        return session


# -- policies ----------------------------------------------------------------


class Policy(Protocol):
    def next_action(self, session: ExplorationSession) -> dict[str, Any] | None: ...


class ReplayPolicy:
    """Feeds back the decision events of a recorded trace, in order."""

    def __init__(self, events: Iterable[dict[str, Any]]):
        self._events = [e for e in events if e.get("action") in DECISION_ACTIONS]
        self._index = 0

    @classmethod
    def from_trace(cls, doc: dict[str, Any]) -> ReplayPolicy:
        if doc.get("schema_version") != EXPORT_SCHEMA_VERSION:
            raise EngineError("bad-document", "unsupported trace schema_version")
        return cls(doc["events"])

    def next_action(self, session: ExplorationSession) -> dict[str, Any] | None:
        if self._index >= len(self._events):
            return None
        event = self._events[self._index]
        self._index += 1
        return event


class AutoOverlapPolicy:
    """Explores the k critique cues that overlap the paragraph most, one
    elaboration prompt per thread, until the prompt budget runs out."""

    def __init__(self, k: int = 2, budget: int = 5):
        self.k = k
        self.budget = budget
        self._ranking: list[str] | None = None

    def _rank_roots(self, session: ExplorationSession) -> list[str]:
        if self._ranking is None:
            roots = session.root_cues()
            scored = score_against([(c.id, c.text) for c in roots], [session.paragraph])
            self._ranking = [s.label for s in scored]
        return self._ranking

    def next_action(self, session: ExplorationSession) -> dict[str, Any] | None:
        if session.state is SessionState.TRIAGE_PENDING:
            ranking = self._rank_roots(session)
            for index, cue_id in enumerate(ranking):
                if session.cues[cue_id].triage is None:
                    category = "explore" if index < self.k else "evaluate"
                    return {"action": "triage", "data": {"cue_id": cue_id, "category": category}}
            if any(
                c.thread_id is None for c in session.cues_by_category(TriageCategory.EXPLORE)
            ):
                return {"action": "select_thread", "data": {}}
            return None
        if session.state is SessionState.THREAD_OPEN:
            for thread in session.threads:
                if not thread.prompt_ids and len(session.prompts) < self.budget:
                    root = session.cues[thread.root_cue_id]
                    return {
                        "action": "request_detailing",
                        "data": {
                            "thread_id": thread.id,
                            "kind": TemplateKind.ELABORATE_ON.value,
                            "cue_text": root.label,
                        },
                    }
                if thread.prompt_ids and not thread.selected_cue_ids:
                    best = self._best_cue(session, thread)
                    if best is not None:
                        return {
                            "action": "select_cues",
                            "data": {"thread_id": thread.id, "cue_ids": [best]},
                        }
            if len(session.prompts) < self.budget and any(
                c.thread_id is None for c in session.cues_by_category(TriageCategory.EXPLORE)
            ):
                return {"action": "select_thread", "data": {}}
        return None

    def _best_cue(self, session: ExplorationSession, thread: Thread) -> str | None:
        candidates = [
            session.cues[cid]
            for r in session.responses
            if r.prompt_id in thread.prompt_ids
            for cid in r.cue_ids
            if session.cues[cid].selected_in is None
        ]
        if not candidates:
            return None
        evaluation = [c.text for c in session.cues_by_category(TriageCategory.EVALUATE)]
        if not evaluation:
            return candidates[0].id
        scored = score_against([(c.id, c.text) for c in candidates], evaluation)
        return scored[0].label


class RandomPolicy:
    """Takes uniformly random legal decisions; useful for fuzzing the
    state machine.  Deterministic for a given seed and provider."""

    def __init__(self, seed: int, budget: int = 6, max_decisions: int = 40):
        self.rng = _random.Random(seed)
        self.budget = budget
        self.max_decisions = max_decisions
        self._taken = 0

    def next_action(self, session: ExplorationSession) -> dict[str, Any] | None:
        self._taken += 1
        if self._taken > self.max_decisions:
            return None
        state = session.state
        options: list[str] = []
        roots = session.root_cues()
        untriaged = [c for c in roots if c.triage is None]
        unthreaded = [
            c for c in session.cues_by_category(TriageCategory.EXPLORE) if c.thread_id is None
        ]
        if state is SessionState.TRIAGE_PENDING:
            if untriaged:
                options.append("triage")
            elif unthreaded:
                options.append("select_thread")
        elif state is SessionState.THREAD_OPEN:
            if not untriaged and unthreaded:
                options.append("select_thread")
            if len(session.prompts) < self.budget:
                options.append("request_detailing")
            if self._selectable(session):
                options.append("select_cues")
            explored = [c for c in session.cues.values() if c.selected_in or c.thread_id]
            if len(explored) >= 2 and len(session.prompts) < self.budget:
                options.append("combine")
            if not session.unanswered_prompts():
                options.append("rewrite")
        elif state is SessionState.REWRITE_PENDING:
            options.append("rewrite")
        if not options:
            return None
        choice = self.rng.choice(sorted(options))
        return self._build(session, choice)

    def _selectable(self, session: ExplorationSession) -> list[tuple[str, str]]:
        pairs = []
        for thread in session.threads:
            for response in session.responses:
                prompt = next(p for p in session.prompts if p.id == response.prompt_id)
                claimable = (
                    prompt.id in thread.prompt_ids or prompt.kind in COMBINATION_KINDS
                )
                if not claimable:
                    continue
                for cue_id in response.cue_ids:
                    if session.cues[cue_id].selected_in is None:
                        pairs.append((thread.id, cue_id))
        return pairs

    def _build(self, session: ExplorationSession, choice: str) -> dict[str, Any]:
        if choice == "triage":
            cue = self.rng.choice([c.id for c in session.root_cues() if c.triage is None])
            category = self.rng.choice(sorted(c.value for c in TriageCategory))
            return {"action": "triage", "data": {"cue_id": cue, "category": category}}
        if choice == "select_thread":
            return {"action": "select_thread", "data": {}}
        if choice == "request_detailing":
            thread = self.rng.choice([t.id for t in session.threads])
            kind = self.rng.choice(sorted(k.value for k in DETAILING_KINDS))
            return {
                "action": "request_detailing",
                "data": {"thread_id": thread, "kind": kind, "cue_text": None},
            }
        if choice == "select_cues":
            thread_id, cue_id = self.rng.choice(self._selectable(session))
            return {"action": "select_cues", "data": {"thread_id": thread_id, "cue_ids": [cue_id]}}
        if choice == "combine":
            explored = sorted(
                c.id for c in session.cues.values() if c.selected_in or c.thread_id
            )
            cue_a, cue_b = self.rng.sample(explored, 2)
            kind = self.rng.choice(sorted(k.value for k in COMBINATION_KINDS))
            return {"action": "combine", "data": {"cue_a": cue_a, "cue_b": cue_b, "kind": kind}}
        return {
            "action": "rewrite",
            "data": {"paragraph": session.paragraph + " Revised for clarity."},
        }


# -- driving -----------------------------------------------------------------


def apply_action(session: ExplorationSession, action: str, data: dict[str, Any]) -> None:
    if action == "triage":
        session.triage(data["cue_id"], data["category"])
    elif action == "select_thread":
        session.select_next_thread()
    elif action == "request_detailing":
        session.request_detailing(data["thread_id"], data["kind"], data.get("cue_text"))
    elif action == "select_cues":
        session.select_cues(data["thread_id"], data["cue_ids"])
    elif action == "combine":
        session.combine(data["cue_a"], data["cue_b"], data["kind"])
    elif action == "rewrite":
        session.rewrite(data["paragraph"])
    elif action == "terminate":
        session.terminate()
    else:
        raise EngineError("unknown-action", f"cannot apply action {action!r}")


def pump(session: ExplorationSession, provider: Provider) -> int:
    """Answer every unanswered prompt through the provider.  Returns the
    number of responses ingested."""
    count = 0
    for prompt in list(session.prompts):
        if not prompt.answered:
            text = provider.complete(prompt.text)
            session.ingest_response(prompt.id, text)
            count += 1
    return count


def run_policy(
    session: ExplorationSession,
    provider: Provider,
    policy: Policy,
    max_steps: int = 500,
) -> ExplorationSession:
    """Drive a session to DONE: request the critique, then alternate between
    answering open prompts and asking the policy for the next decision."""
    if session.state is SessionState.AWAITING_CRITIQUE and not session.prompts:
        session.request_critique()
    steps = 0
    while session.state is not SessionState.DONE:
        pump(session, provider)
        action = policy.next_action(session)
        if action is None:
            session.terminate()
            break
        apply_action(session, action["action"], action.get("data", {}))
        steps += 1
        if steps >= max_steps:
            logger.warning("session %s hit the step limit; terminating", session.id)
            if session.state is not SessionState.DONE:
                session.terminate()
            break
    return session


def load_trace(path: str) -> dict[str, Any]:
    from pathlib import Path

    return json.loads(Path(path).read_text("utf-8"))
