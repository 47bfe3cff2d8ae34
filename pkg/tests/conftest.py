from __future__ import annotations

import socket

import pytest

from cuegraph.fixtures import fixture_path

_LOCAL_HOSTS = {"127.0.0.1", "::1", "localhost"}


@pytest.fixture(autouse=True)
def _no_external_network(monkeypatch):
    """Fail any test that tries to reach beyond localhost."""
    real_connect = socket.socket.connect

    def guarded(self, address, *args, **kwargs):
        if isinstance(address, tuple) and address:
            host = address[0]
            if isinstance(host, str) and host not in _LOCAL_HOSTS:
                raise AssertionError(f"test attempted outbound network to {host!r}")
        return real_connect(self, address, *args, **kwargs)

    monkeypatch.setattr(socket.socket, "connect", guarded)


@pytest.fixture(scope="session")
def fixtures():
    """Resolved paths for every bundled fixture the tests rely on."""
    names = [
        "analogy_initial.cga",
        "analogy_llm_delta.cga",
        "metaphor_initial.cga",
        "metaphor_llm_fragment.cga",
        "analogy_paragraph.txt",
        "metaphor_paragraph.txt",
        "analogy_replay.json",
        "metaphor_replay.json",
        "analogy.trace",
        "metaphor.trace",
        "swan_lake_map.json",
    ]
    return {name: fixture_path(name) for name in names}
