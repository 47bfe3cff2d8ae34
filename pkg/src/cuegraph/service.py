"""HTTP facade over exploration sessions, graphs, and metrics.

Sessions persist as their JSON export documents inside a data directory and
are reloaded on startup, so restarts lose nothing.  Long-running work is
returned through job tickets even though it executes synchronously; clients
poll GET /jobs/{id} either way.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .annotation import AnnotationError, parse_annotation, to_graph
from .engine import EngineError, ExplorationSession, SessionState, pump
from .graph import ConceptGraph, GraphError, merge_graphs
from .metrics import MetricsError, metrics_report_dict
from .providers import Provider, ProviderError
from .render import graph_to_dict, graph_to_dot

logger = logging.getLogger(__name__)

CLIENT_HEADER = "X-Client-Name"

NOT_FOUND_CODES = {
    "unknown-session",
    "unknown-cue",
    "unknown-thread",
    "unknown-prompt",
    "unknown-revision",
    "unknown-job",
    "no-annotation",
}
CONFLICT_CODES = {
    "not-allowed",
    "pending-prompts",
    "locked-cue",
    "already-selected",
    "already-answered",
    "cue-not-in-thread",
    "cue-not-selected",
    "critique-already-requested",
    "triage-incomplete",
    "no-explore-cues",
    "thread-closed",
    "same-cue",
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


def _error_response(status: int, code: str, message: str, details: dict | None = None):
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


class SessionStore:
    """Owns the live sessions, their ids, persistence, and job tickets."""

    def __init__(self, data_dir: str | Path | None = None, provider: Provider | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.provider = provider
        self.sessions: dict[str, ExplorationSession] = {}
        self.jobs: dict[str, dict[str, Any]] = {}
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def _load(self) -> None:
        import json

        for path in sorted(self.data_dir.glob("s*.json")):
            try:
                doc = json.loads(path.read_text("utf-8"))
                session = ExplorationSession.from_document(doc)
            except (OSError, ValueError, KeyError, EngineError) as exc:
                logger.warning("skipping unreadable session file %s: %s", path, exc)
                continue
            self.sessions[session.id] = session
        if self.sessions:
            logger.info("restored %d session(s) from %s", len(self.sessions), self.data_dir)

    def _next_id(self) -> str:
        taken = {int(sid[1:]) for sid in self.sessions if sid[1:].isdigit()}
        n = 1
        while n in taken:
            n += 1
        return f"s{n}"

    def create(self, paragraph: str, client: str) -> ExplorationSession:
        session = ExplorationSession(self._next_id(), paragraph, client=client)
        self.sessions[session.id] = session
        self.save(session)
        return session

    def get(self, session_id: str) -> ExplorationSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return session

    def save(self, session: ExplorationSession) -> None:
        if self.data_dir:
            path = self.data_dir / f"{session.id}.json"
            path.write_text(session.export_json(), "utf-8")

    def new_job(self, result: dict[str, Any]) -> dict[str, Any]:
        job_id = f"j{len(self.jobs) + 1}"
        ticket = {"job_id": job_id, "status": "complete", "result": result}
        self.jobs[job_id] = ticket
        return ticket

    def pump(self, session: ExplorationSession) -> int:
        if self.provider is None:
            return 0
        return pump(session, self.provider)


class CreateSessionBody(BaseModel):
    paragraph: str = Field(min_length=1)


class ResponseBody(BaseModel):
    prompt_id: str
    text: str = Field(min_length=1)


class TriageBody(BaseModel):
    category: str


class DetailBody(BaseModel):
    kind: str
    cue_text: str | None = None


class CombineBody(BaseModel):
    cue_a: str
    cue_b: str
    kind: str


class SelectCuesBody(BaseModel):
    cue_ids: list[str] = Field(min_length=1)


class RewriteBody(BaseModel):
    paragraph: str = Field(min_length=1)


class AnnotationBody(BaseModel):
    revision: int = 0
    text: str = Field(min_length=1)


def _session_view(session: ExplorationSession) -> dict[str, Any]:
    return session.to_document()["session"]


def _revision_graph(session: ExplorationSession, revision: int) -> ConceptGraph:
    """Annotations layer up: the graph at revision N merges every annotation
    attached to revisions 0..N."""
    if not 0 <= revision < len(session.revisions):
        raise ApiError(404, "unknown-revision", f"session has no revision {revision}")
    layers = [
        to_graph(parse_annotation(session.annotations[rev]))
        for rev in sorted(session.annotations)
        if rev <= revision
    ]
    if not layers:
        raise ApiError(
            404, "no-annotation", f"no annotation attached at or before revision {revision}"
        )
    graph = layers[0]
    for layer in layers[1:]:
        graph = merge_graphs(graph, layer)
    return graph


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="cuegraph service", version="1.0")
    # Browser clients load from their own origin; keys never reach them.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        if exc.code in NOT_FOUND_CODES:
            status = 404
        elif exc.code in CONFLICT_CODES:
            status = 409
        else:
            status = 422
        return _error_response(status, exc.code, str(exc))

    @app.exception_handler(AnnotationError)
    async def annotation_error_handler(request: Request, exc: AnnotationError):
        return _error_response(
            422, "bad-annotation", str(exc), {"line": exc.line, "column": exc.column}
        )

    @app.exception_handler(GraphError)
    async def graph_error_handler(request: Request, exc: GraphError):
        return _error_response(422, exc.code, str(exc))

    @app.exception_handler(MetricsError)
    async def metrics_error_handler(request: Request, exc: MetricsError):
        return _error_response(422, exc.code, str(exc))

    @app.exception_handler(ProviderError)
    async def provider_error_handler(request: Request, exc: ProviderError):
        return _error_response(503, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return _error_response(
            422, "invalid-request", "request body failed validation", {"errors": exc.errors()}
        )

    @app.post("/sessions", status_code=201)
    def create_session(
        body: CreateSessionBody, x_client_name: str = Header(default="anonymous")
    ):
        session = store.create(body.paragraph, client=x_client_name)
        return _session_view(session)

    @app.get("/sessions")
    def list_sessions():
        return {
            "sessions": [
                {
                    "id": s.id,
                    "client": s.client,
                    "state": s.state.value,
                    "revision_count": len(s.revisions),
                }
                for _, s in sorted(store.sessions.items())
            ]
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(store.get(session_id))

    @app.post("/sessions/{session_id}/responses")
    def post_response(session_id: str, body: ResponseBody):
        session = store.get(session_id)
        response = session.ingest_response(body.prompt_id, body.text)
        store.save(session)
        return {
            "response_id": response.id,
            "prompt_id": response.prompt_id,
            "cue_ids": list(response.cue_ids),
        }

    @app.post("/sessions/{session_id}/jobs/critique", status_code=202)
    def start_critique(session_id: str):
        session = store.get(session_id)
        prompt = session.request_critique()
        answered = store.pump(session)
        store.save(session)
        result = {
            "session_id": session.id,
            "prompt_id": prompt.id,
            "answered": bool(answered),
            "state": session.state.value,
        }
        return store.new_job(result)

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        ticket = store.jobs.get(job_id)
        if ticket is None:
            raise ApiError(404, "unknown-job", f"no job {job_id!r}")
        return ticket

    @app.post("/sessions/{session_id}/cues/{cue_id}/triage")
    def triage_cue(session_id: str, cue_id: str, body: TriageBody):
        session = store.get(session_id)
        cue = session.triage(cue_id, body.category)
        store.save(session)
        return {
            "cue_id": cue.id,
            "category": cue.triage.value,
            "state": session.state.value,
        }

    @app.post("/sessions/{session_id}/threads/next")
    def next_thread(session_id: str):
        session = store.get(session_id)
        thread = session.select_next_thread()
        store.save(session)
        return {
            "thread_id": thread.id,
            "root_cue_id": thread.root_cue_id,
            "state": session.state.value,
        }

    @app.post("/sessions/{session_id}/threads/{thread_id}/detail")
    def detail_thread(session_id: str, thread_id: str, body: DetailBody):
        session = store.get(session_id)
        prompt = session.request_detailing(thread_id, body.kind, body.cue_text)
        answered = store.pump(session)
        store.save(session)
        return {
            "prompt_id": prompt.id,
            "text": prompt.text,
            "answered": bool(answered),
            "cue_ids": list(session.responses[-1].cue_ids) if answered else [],
        }

    @app.post("/sessions/{session_id}/threads/{thread_id}/select")
    def select_cues(session_id: str, thread_id: str, body: SelectCuesBody):
        session = store.get(session_id)
        selected = session.select_cues(thread_id, body.cue_ids)
        store.save(session)
        return {"thread_id": thread_id, "cue_ids": [c.id for c in selected]}

    @app.post("/sessions/{session_id}/combine")
    def combine(session_id: str, body: CombineBody):
        session = store.get(session_id)
        prompt = session.combine(body.cue_a, body.cue_b, body.kind)
        answered = store.pump(session)
        store.save(session)
        return {
            "prompt_id": prompt.id,
            "text": prompt.text,
            "answered": bool(answered),
            "cue_ids": list(session.responses[-1].cue_ids) if answered else [],
        }

    @app.post("/sessions/{session_id}/rewrite")
    def rewrite(session_id: str, body: RewriteBody):
        session = store.get(session_id)
        revision = session.rewrite(body.paragraph)
        store.save(session)
        return {"revision": revision["revision"], "state": session.state.value}

    @app.post("/sessions/{session_id}/terminate")
    def terminate(session_id: str):
        session = store.get(session_id)
        session.terminate()
        store.save(session)
        return {"state": session.state.value}

    @app.post("/sessions/{session_id}/annotation")
    def attach_annotation(session_id: str, body: AnnotationBody):
        session = store.get(session_id)
        session.attach_annotation(body.revision, body.text)
        store.save(session)
        return {"revision": body.revision, "attached": True}

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str, revision: int = 0, format: str = "json"):
        session = store.get(session_id)
        graph = _revision_graph(session, revision)
        if format == "dot":
            return PlainTextResponse(graph_to_dot(graph), media_type="text/vnd.graphviz")
        if format != "json":
            raise ApiError(400, "bad-format", f"unsupported graph format {format!r}")
        return graph_to_dict(graph)

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str, revision: int = 0):
        session = store.get(session_id)
        graph = _revision_graph(session, revision)
        return metrics_report_dict(graph)

    return app


def build_default_app(
    data_dir: str | Path | None = None, provider: Provider | None = None
) -> FastAPI:
    return create_app(SessionStore(data_dir=data_dir, provider=provider))
