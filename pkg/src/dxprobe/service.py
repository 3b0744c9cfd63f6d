"""HTTP session service wrapping the interview engine.

JSON over HTTP, poll-based: the client creates a session against a named
knowledge base, posts the open-probe response, then alternates answers and
reads. Sessions live in an in-memory registry; with a snapshot directory
configured, every mutation persists the evidence log (not posteriors) and a
restart replays it.

Errors are ``{"code", "message", "field"?}`` with 400 (bad input), 404
(unknown resource), 409 (phase/evidence conflicts).
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import session as sx
from .errors import (
    AlreadyObserved,
    DxProbeError,
    ImpossibleEvidence,
    MalformedEvidence,
    UnknownState,
    UnknownSymptom,
    UnknownVariable,
    UnsupportedMode,
    WrongPhase,
)
from .kb import KnowledgeBase
from .learning import expected_value
from .network import Posterior
from .reports import OpenProbeResponse


class CreateSessionRequest(BaseModel):
    kb: str
    mode: str = "fixed-params"


class OpenProbeRequest(BaseModel):
    reported: dict[str, str] = {}


class AnswerRequest(BaseModel):
    symptom: str
    state: str


@dataclass
class _Entry:
    session: sx.Session
    created_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, field_name: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field_name = field_name

    def body(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.field_name:
            out["field"] = self.field_name
        return out


_ERROR_MAP: list[tuple[type, int, str]] = [
    (WrongPhase, 409, "wrong-phase"),
    (AlreadyObserved, 409, "already-observed"),
    (ImpossibleEvidence, 409, "impossible-evidence"),
    (UnknownSymptom, 404, "unknown-symptom"),
    (UnknownVariable, 404, "unknown-variable"),
    (UnknownState, 400, "unknown-state"),
    (UnsupportedMode, 400, "unsupported-mode"),
    (MalformedEvidence, 400, "malformed-evidence"),
]


def _translate(exc: DxProbeError) -> ServiceError:
    for etype, status, code in _ERROR_MAP:
        if isinstance(exc, etype):
            return ServiceError(status, code, str(exc))
    return ServiceError(400, "invalid-request", str(exc))


def _posterior_view(post: Posterior) -> dict:
    view = {
        "disorder": post.variable,
        "p_present": 1.0 - post.p("absent") if "absent" in post.states else max(post.probabilities),
        "probabilities": post.as_dict(),
    }
    return view


def _differential_view(session: sx.Session) -> dict:
    return {
        "session": session.id,
        "phase": session.phase,
        "differential": [_posterior_view(p) for p in sx.differential(session)],
    }


def _params_view(session: sx.Session) -> dict:
    post_r, post_b = sx.param_posteriors(session)
    return {
        "reportability": {
            "values": [float(s) for s in post_r.states],
            "probabilities": list(post_r.probabilities),
            "expected": expected_value(post_r),
        },
        "bias": {
            "values": [float(s) for s in post_b.states],
            "probabilities": list(post_b.probabilities),
            "expected": expected_value(post_b),
        },
    }


def _catalog_view(kb: KnowledgeBase) -> list[dict]:
    return [
        {"id": sid, "states": list(kb.network.variable(sid).states)}
        for sid in kb.symptom_ids
    ]


def _resource_view(entry: _Entry, kb_name: str) -> dict:
    session = entry.session
    out = {
        "id": session.id,
        "kb": kb_name,
        "mode": session.mode,
        "phase": session.phase,
        "created_at": entry.created_at,
        "question": session.question_id,
        "evidence_log": list(session.log),
        "catalog": _catalog_view(session.kb),
        "differential": [_posterior_view(p) for p in sx.differential(session)],
    }
    if session.mode == "learn-global":
        out["params"] = _params_view(session)
    return out


def create_app(kbs: dict[str, KnowledgeBase], snapshot_dir: str | Path | None = None,
               console_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="dxprobe session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=console_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    registry: dict[str, _Entry] = {}
    registry_lock = threading.Lock()
    kb_names = {id(kb): name for name, kb in kbs.items()}
    snapshots = Path(snapshot_dir) if snapshot_dir else None

    def _snapshot(entry: _Entry) -> None:
        if snapshots is None:
            return
        snapshots.mkdir(parents=True, exist_ok=True)
        doc = {
            "id": entry.session.id,
            "kb": kb_names[id(entry.session.kb)],
            "mode": entry.session.mode,
            "question": entry.session.question_id,
            "created_at": entry.created_at,
            "log": entry.session.log,
        }
        path = snapshots / f"{entry.session.id}.json"
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")

    def _restore() -> None:
        if snapshots is None or not snapshots.is_dir():
            return
        for path in sorted(snapshots.glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            kb = kbs.get(doc["kb"])
            if kb is None:
                continue
            session = sx.replay(kb, doc["mode"], doc["log"], doc.get("question", "initial"),
                                session_id=doc["id"])
            registry[session.id] = _Entry(session, doc.get("created_at", time.time()))

    _restore()

    def _entry(session_id: str) -> _Entry:
        with registry_lock:
            entry = registry.get(session_id)
        if entry is None:
            raise ServiceError(404, "unknown-session", f"no session {session_id!r}")
        return entry

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field = ".".join(str(loc) for loc in first.get("loc", []) if loc != "body")
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid-request",
                "message": first.get("msg", "invalid request body"),
                "field": field or None,
            },
        )

    @app.exception_handler(DxProbeError)
    async def _domain_error(_req: Request, exc: DxProbeError):
        err = _translate(exc)
        return JSONResponse(status_code=err.status, content=err.body())

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "kbs": sorted(kbs)}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        kb = kbs.get(req.kb)
        if kb is None:
            raise ServiceError(404, "unknown-kb", f"no knowledge base {req.kb!r}", "kb")
        if req.mode not in sx.MODES:
            raise ServiceError(400, "unsupported-mode",
                               f"mode must be one of {sx.MODES}", "mode")
        session = sx.start_session(kb, req.mode)
        entry = _Entry(session, time.time())
        with registry_lock:
            registry[session.id] = entry
        _snapshot(entry)
        return _resource_view(entry, req.kb)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        entry = _entry(session_id)
        with entry.lock:
            return _resource_view(entry, kb_names[id(entry.session.kb)])

    @app.post("/sessions/{session_id}/open-probe")
    def post_open_probe(session_id: str, req: OpenProbeRequest):
        entry = _entry(session_id)
        with entry.lock:
            response = OpenProbeResponse(entry.session.question_id, req.reported)
            sx.submit_open_probe(entry.session, response)
            _snapshot(entry)
            return _differential_view(entry.session)

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, req: AnswerRequest):
        entry = _entry(session_id)
        with entry.lock:
            sx.submit_closed_probe(entry.session, req.symptom, req.state)
            _snapshot(entry)
            return _differential_view(entry.session)

    @app.get("/sessions/{session_id}/questions")
    def get_questions(session_id: str, k: int = 3):
        entry = _entry(session_id)
        with entry.lock:
            scores = sx.next_questions(entry.session, k)
        return {
            "session": session_id,
            "questions": [
                {"symptom": q.symptom_id, "score": q.score, "rank": q.rank}
                for q in scores
            ],
        }

    @app.get("/sessions/{session_id}/differential")
    def get_differential(session_id: str):
        entry = _entry(session_id)
        with entry.lock:
            return _differential_view(entry.session)

    @app.get("/sessions/{session_id}/params")
    def get_params(session_id: str):
        entry = _entry(session_id)
        with entry.lock:
            if entry.session.mode != "learn-global":
                raise ServiceError(409, "no-parameters",
                                   "parameter posteriors exist only in learn-global mode")
            return {"session": session_id, **_params_view(entry.session)}

    return app
