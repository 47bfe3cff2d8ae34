from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from cuegraph.providers import ReplayProvider
from cuegraph.service import SessionStore, create_app

TRIAGE_PLAN = [
    ("PROMPT1.1", "explore"),
    ("PROMPT1.3", "explore"),
    ("PROMPT1.2", "evaluate"),
    ("PROMPT1.4", "evaluate"),
    ("PROMPT1.5", "ignore"),
    ("PROMPT1.6", "ignore"),
]

FIRST_CUE_TEXT = "the analogy between topic in poetry and song in dance"


@pytest.fixture()
def paragraph(fixtures):
    return fixtures["analogy_paragraph.txt"].read_text("utf-8").strip()


@pytest.fixture()
def client(fixtures):
    provider = ReplayProvider.from_path(fixtures["analogy_replay.json"])
    app = create_app(SessionStore(provider=provider))
    return TestClient(app)


@pytest.fixture()
def offline_client():
    return TestClient(create_app(SessionStore()))


def make_session(client, paragraph, name="anonymous"):
    response = client.post(
        "/sessions", json={"paragraph": paragraph}, headers={"X-Client-Name": name}
    )
    assert response.status_code == 201
    return response.json()


def run_critique(client, session_id):
    response = client.post(f"/sessions/{session_id}/jobs/critique")
    assert response.status_code == 202
    return response.json()


class TestSessions:
    def test_create_returns_full_view(self, client, paragraph):
        doc = make_session(client, paragraph, name="weaver")
        assert doc["id"] == "s1"
        assert doc["client"] == "weaver"
        assert doc["state"] == "awaiting_critique"
        assert doc["revisions"][0]["paragraph"] == paragraph

    def test_client_name_defaults(self, client, paragraph):
        response = client.post("/sessions", json={"paragraph": paragraph})
        assert response.json()["client"] == "anonymous"

    def test_listing(self, client, paragraph):
        make_session(client, paragraph)
        make_session(client, paragraph)
        listing = client.get("/sessions").json()
        assert [s["id"] for s in listing["sessions"]] == ["s1", "s2"]

    def test_unknown_session_shape(self, client):
        response = client.get("/sessions/s9")
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "unknown-session"
        assert set(body) == {"code", "message", "details"}

    def test_empty_paragraph_fails_validation(self, client):
        response = client.post("/sessions", json={"paragraph": ""})
        assert response.status_code == 422
        assert response.json()["code"] == "invalid-request"


class TestCritiqueJob:
    def test_job_ticket_and_lookup(self, client, paragraph):
        make_session(client, paragraph)
        ticket = run_critique(client, "s1")
        assert ticket["job_id"] == "j1"
        assert ticket["status"] == "complete"
        assert ticket["result"]["answered"] is True
        assert ticket["result"]["state"] == "triage_pending"
        assert client.get("/jobs/j1").json() == ticket

    def test_unknown_job(self, client):
        response = client.get("/jobs/j9")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown-job"

    def test_critique_yields_six_cues(self, client, paragraph):
        make_session(client, paragraph)
        run_critique(client, "s1")
        doc = client.get("/sessions/s1").json()
        assert [c["id"] for c in doc["cues"]] == [f"PROMPT1.{i}" for i in range(1, 7)]

    def test_second_critique_conflicts(self, client, paragraph):
        make_session(client, paragraph)
        run_critique(client, "s1")
        response = client.post("/sessions/s1/jobs/critique")
        assert response.status_code == 409

    def test_offline_store_leaves_prompt_open(self, offline_client):
        make_session(offline_client, "A paragraph that stands alone.")
        ticket = run_critique(offline_client, "s1")
        assert ticket["result"]["answered"] is False
        assert ticket["result"]["state"] == "awaiting_critique"


class TestExplorationFlow:
    def drive_to_thread(self, client, paragraph):
        make_session(client, paragraph)
        run_critique(client, "s1")
        for cue_id, category in TRIAGE_PLAN:
            response = client.post(
                f"/sessions/s1/cues/{cue_id}/triage", json={"category": category}
            )
            assert response.status_code == 200
        response = client.post("/sessions/s1/threads/next")
        assert response.status_code == 200
        return response.json()

    def test_thread_selection(self, client, paragraph):
        picked = self.drive_to_thread(client, paragraph)
        assert picked["thread_id"] == "t1"
        assert picked["root_cue_id"] == "PROMPT1.1"
        assert picked["state"] == "thread_open"

    def test_detail_pumps_inline(self, client, paragraph):
        self.drive_to_thread(client, paragraph)
        response = client.post(
            "/sessions/s1/threads/t1/detail",
            json={"kind": "elaborate_on", "cue_text": FIRST_CUE_TEXT},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["prompt_id"] == "p2"
        assert body["answered"] is True
        assert body["cue_ids"][0] == "PROMPT2.1"

    def test_select_then_rewrite(self, client, paragraph):
        self.drive_to_thread(client, paragraph)
        client.post(
            "/sessions/s1/threads/t1/detail",
            json={"kind": "elaborate_on", "cue_text": FIRST_CUE_TEXT},
        )
        response = client.post(
            "/sessions/s1/threads/t1/select", json={"cue_ids": ["PROMPT2.2"]}
        )
        assert response.status_code == 200
        assert response.json()["cue_ids"] == ["PROMPT2.2"]
        response = client.post(
            "/sessions/s1/rewrite", json={"paragraph": "A fresh paragraph."}
        )
        assert response.status_code == 200
        assert response.json() == {"revision": 1, "state": "done"}

    def test_triage_conflicts_and_validation(self, client, paragraph):
        make_session(client, paragraph)
        run_critique(client, "s1")
        response = client.post(
            "/sessions/s1/cues/PROMPT1.1/triage", json={"category": "postpone"}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "bad-category"
        response = client.post("/sessions/s1/threads/next")
        assert response.status_code == 409
        assert response.json()["code"] == "triage-incomplete"

    def test_rewrite_before_critique_conflicts(self, client, paragraph):
        make_session(client, paragraph)
        response = client.post("/sessions/s1/rewrite", json={"paragraph": "x"})
        assert response.status_code == 409
        assert response.json()["code"] == "not-allowed"

    def test_terminate_finishes_session(self, client, paragraph):
        self.drive_to_thread(client, paragraph)
        response = client.post("/sessions/s1/terminate")
        assert response.status_code == 200
        assert response.json() == {"state": "done"}
        again = client.post("/sessions/s1/terminate")
        assert again.status_code == 409
        assert again.json()["code"] == "not-allowed"

    def test_unknown_cue_is_404(self, client, paragraph):
        make_session(client, paragraph)
        run_critique(client, "s1")
        response = client.post(
            "/sessions/s1/cues/PROMPT9.9/triage", json={"category": "explore"}
        )
        assert response.status_code == 404
        assert response.json()["code"] == "unknown-cue"


class TestGraphAndMetrics:
    def attach(self, client, fixtures, paragraph):
        make_session(client, paragraph)
        response = client.post(
            "/sessions/s1/annotation",
            json={
                "revision": 0,
                "text": fixtures["analogy_initial.cga"].read_text("utf-8"),
            },
        )
        assert response.status_code == 200

    def test_graph_json(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        payload = client.get("/sessions/s1/graph?revision=0&format=json").json()
        assert len(payload["concepts"]) == 24
        labels = {c["label"] for c in payload["concepts"]}
        assert "central idea" in labels

    def test_graph_dot(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        response = client.get("/sessions/s1/graph?revision=0&format=dot")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/vnd.graphviz")
        assert response.text.startswith("digraph")

    def test_bad_format(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        response = client.get("/sessions/s1/graph?format=yaml")
        assert response.status_code == 400
        assert response.json()["code"] == "bad-format"

    def test_no_annotation_404(self, client, paragraph):
        make_session(client, paragraph)
        response = client.get("/sessions/s1/graph")
        assert response.status_code == 404
        assert response.json()["code"] == "no-annotation"

    def test_unknown_revision_404(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        response = client.get("/sessions/s1/graph?revision=5")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown-revision"

    def test_bad_annotation_reports_position(self, client, paragraph):
        make_session(client, paragraph)
        response = client.post(
            "/sessions/s1/annotation",
            json={"revision": 0, "text": "#paragraph r0\nS1: A.\n  verb: a\n  verb: b\n"},
        )
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "bad-annotation"
        assert body["details"]["line"] == 4

    def test_metrics_revision_zero(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        payload = client.get("/sessions/s1/metrics?revision=0").json()
        assert payload["concept_count"] == 24
        assert payload["paths"]["length_histogram"] == {"2": 1, "3": 5, "4": 3, "5": 4}

    def test_revision_graphs_merge_cumulatively(self, client, fixtures, paragraph):
        self.attach(client, fixtures, paragraph)
        # later annotations need a later revision to hang from
        make_rewritable(client)
        client.post("/sessions/s1/rewrite", json={"paragraph": "Revised text."})
        response = client.post(
            "/sessions/s1/annotation",
            json={"revision": 1, "text": fixtures["analogy_llm_delta.cga"].read_text("utf-8")},
        )
        assert response.status_code == 200
        base = client.get("/sessions/s1/graph?revision=0").json()
        merged = client.get("/sessions/s1/graph?revision=1").json()
        assert len(base["concepts"]) == 24
        assert len(merged["concepts"]) == 54


def make_rewritable(client):
    """Walk s1 to a state where rewrite is legal (all cues ignored)."""
    run_critique(client, "s1")
    doc = client.get("/sessions/s1").json()
    for cue in doc["cues"]:
        client.post(f"/sessions/s1/cues/{cue['id']}/triage", json={"category": "ignore"})


class TestPersistence:
    def test_saved_file_matches_export(self, tmp_path, fixtures, paragraph):
        provider = ReplayProvider.from_path(fixtures["analogy_replay.json"])
        store = SessionStore(data_dir=tmp_path, provider=provider)
        client = TestClient(create_app(store))
        make_session(client, paragraph)
        run_critique(client, "s1")
        on_disk = json.loads((tmp_path / "s1.json").read_text("utf-8"))
        assert on_disk["session"] == client.get("/sessions/s1").json()

    def test_reload_continues_session(self, tmp_path, fixtures, paragraph):
        provider = ReplayProvider.from_path(fixtures["analogy_replay.json"])
        first = TestClient(create_app(SessionStore(data_dir=tmp_path, provider=provider)))
        make_session(first, paragraph)
        run_critique(first, "s1")

        second = TestClient(create_app(SessionStore(data_dir=tmp_path, provider=provider)))
        doc = second.get("/sessions/s1").json()
        assert doc["state"] == "triage_pending"
        response = second.post(
            "/sessions/s1/cues/PROMPT1.1/triage", json={"category": "explore"}
        )
        assert response.status_code == 200

    def test_ids_fill_lowest_free_slot(self, tmp_path, paragraph):
        store = SessionStore(data_dir=tmp_path)
        client = TestClient(create_app(store))
        make_session(client, paragraph)
        make_session(client, paragraph)
        del store.sessions["s1"]
        assert make_session(client, paragraph)["id"] == "s1"

    def test_unreadable_files_are_skipped(self, tmp_path, paragraph):
        (tmp_path / "s7.json").write_text("{broken", "utf-8")
        client = TestClient(create_app(SessionStore(data_dir=tmp_path)))
        assert client.get("/sessions").json()["sessions"] == []
        assert make_session(client, paragraph)["id"] == "s1"
