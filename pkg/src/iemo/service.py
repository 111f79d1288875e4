"""Long-lived consultation service: each session owns one engine run on a
worker thread; the engine parks whenever the decision maker's scores are
needed and resumes when they arrive over HTTP.

Endpoints (JSON bodies throughout, session id in the path):

    POST /sessions                create a session from a run config
    GET  /sessions/{id}           progress snapshot
    GET  /sessions/{id}/pending   pending candidate batch, if any
    POST /sessions/{id}/scores    submit scores for the pending batch
    POST /sessions/{id}/abort     cancel the run
    GET  /sessions/{id}/events    server-sent phase-change stream

Errors carry stable machine-readable codes: not_found, invalid_config,
invalid_scores, conflict.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
import uuid

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from .config import ConfigError, config_from_dict
from .engine import RunAborted, run_single

__all__ = ["create_app", "SessionManager"]

PHASE_RUNNING = "running"
PHASE_AWAITING = "awaiting_scores"
PHASE_FINISHED = "finished"
PHASE_ABORTED = "aborted"


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class _Session:
    """One engine run plus the handshake state shared with the HTTP layer."""

    def __init__(self, session_id: str, config):
        self.id = session_id
        self.config = config
        self.phase = PHASE_RUNNING
        self.generation = 0
        self.consultations = 0
        self.trajectory: list = []
        self.pending: dict | None = None
        self.result = None
        self.failure: str | None = None
        self.lock = threading.Lock()
        self.scores_ready = threading.Event()
        self.submitted: dict | None = None
        self.abort_requested = False
        self.version = 0  # bumped on every phase change, for the event stream
        self.thread = threading.Thread(target=self._run, daemon=True)

    # ---- engine side ------------------------------------------------

    def _run(self):
        oracle = _BlockingOracle(self)
        try:
            result = run_single(self.config, oracle=oracle, progress=self._on_generation)
        except RunAborted:
            result = None
        except Exception as exc:  # engine bug; surface instead of hanging
            with self.lock:
                self.failure = f"{type(exc).__name__}: {exc}"
                self._set_phase(PHASE_ABORTED)
            return
        with self.lock:
            self.result = result
            if result is not None and not result.aborted:
                self._set_phase(PHASE_FINISHED)
            else:
                self._set_phase(PHASE_ABORTED)

    def _on_generation(self, gen: int, value):
        with self.lock:
            if self.abort_requested:
                self._set_phase(PHASE_ABORTED)
                raise RunAborted()
            self.generation = gen
            self.trajectory.append(value)

    def _set_phase(self, phase: str):
        # callers hold self.lock
        if self.phase != phase:
            self.phase = phase
            self.version += 1

    def await_scores(self, batch: dict) -> dict:
        with self.lock:
            if self.abort_requested:
                self._set_phase(PHASE_ABORTED)
                raise RunAborted()
            self.pending = batch
            self.generation = batch["generation"]  # parked inside this generation
            self.consultations += 1
            self.submitted = None
            self.scores_ready.clear()
            self._set_phase(PHASE_AWAITING)
        self.scores_ready.wait()
        with self.lock:
            if self.abort_requested or self.submitted is None:
                self._set_phase(PHASE_ABORTED)
                raise RunAborted()
            scores = self.submitted
            self.submitted = None
            self.pending = None
            self._set_phase(PHASE_RUNNING)
            return scores

    # ---- HTTP side --------------------------------------------------

    def snapshot(self) -> dict:
        with self.lock:
            snap = {
                "id": self.id,
                "phase": self.phase,
                "generation": self.generation,
                "generations": self.config.resolved_generations(),
                "consultations": self.consultations,
                "trajectory": list(self.trajectory),
                "aborted": self.phase == PHASE_ABORTED,
            }
            if self.failure:
                snap["failure"] = self.failure
            if self.result is not None and self.phase == PHASE_FINISHED:
                snap["final_objectives"] = np.asarray(self.result.final_f).tolist()
            return snap

    def pending_batch(self) -> dict | None:
        with self.lock:
            return json.loads(json.dumps(self.pending)) if self.pending is not None else None

    def submit(self, scores: dict):
        with self.lock:
            if self.phase in (PHASE_FINISHED, PHASE_ABORTED):
                raise ServiceError(409, "conflict", f"session is {self.phase}")
            if self.phase != PHASE_AWAITING or self.pending is None:
                raise ServiceError(409, "conflict", "no pending candidate batch")
            expected = [c["id"] for c in self.pending["candidates"]]
            if not isinstance(scores, dict):
                raise ServiceError(400, "invalid_scores", "scores must map candidate ids to numbers")
            missing = [c for c in expected if c not in scores]
            extra = [c for c in scores if c not in expected]
            if missing or extra:
                raise ServiceError(
                    400,
                    "invalid_scores",
                    f"score map must cover the batch exactly (missing {missing}, extra {extra})",
                )
            values = {}
            for cid, val in scores.items():
                if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
                    raise ServiceError(400, "invalid_scores", f"score for {cid} is not a finite number")
                values[cid] = float(val)
            self.submitted = values
            self.scores_ready.set()

    def abort(self):
        with self.lock:
            if self.phase == PHASE_FINISHED:
                raise ServiceError(409, "conflict", "session already finished")
            if self.phase == PHASE_ABORTED:
                raise ServiceError(409, "conflict", "session already aborted")
            self.abort_requested = True
            self.scores_ready.set()  # wake a parked consultation


class _BlockingOracle:
    """Bridges the engine's scoring call to the HTTP handshake."""

    def __init__(self, session: _Session):
        self.session = session
        self._counter = 0
        self._population_source = None

    def attach_population_source(self, source):
        # engine hook: lets the batch carry the live population for display
        self._population_source = source

    def score(self, objectives: np.ndarray, generation: int) -> np.ndarray:
        objectives = np.atleast_2d(np.asarray(objectives, dtype=float))
        self._counter += 1
        ids = [f"c{self._counter}-{i}" for i in range(objectives.shape[0])]
        batch = {
            "session_index": self._counter,
            "generation": generation,
            "candidates": [
                {"id": cid, "objectives": row.tolist()} for cid, row in zip(ids, objectives)
            ],
        }
        if objectives.shape[1] <= 3 and self._population_source is not None:
            batch["population"] = np.asarray(self._population_source()).tolist()
        scores = self.session.await_scores(batch)
        return np.asarray([scores[cid] for cid in ids], dtype=float)


class SessionManager:
    def __init__(self):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def create(self, payload: dict) -> _Session:
        if not isinstance(payload, dict):
            raise ServiceError(400, "invalid_config", "config: expected a JSON object")
        payload = dict(payload)
        payload.setdefault("oracle", "human")
        if payload["oracle"] != "human":
            raise ServiceError(400, "invalid_config", "oracle: sessions require the human oracle")
        try:
            config = config_from_dict(payload)
        except ConfigError as exc:
            raise ServiceError(400, "invalid_config", str(exc)) from None
        session = _Session(uuid.uuid4().hex[:12], config)
        with self._lock:
            self._sessions[session.id] = session
        session.thread.start()
        return session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "not_found", f"no session {session_id!r}")
        return session


def create_app(manager: SessionManager | None = None) -> FastAPI:
    app = FastAPI(title="consultation session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=os.environ.get("IEMO_ALLOW_ORIGINS", "*").split(","),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    mgr = manager if manager is not None else SessionManager()
    app.state.manager = mgr

    @app.exception_handler(ServiceError)
    async def _service_error(_request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            payload = await request.json()
        except Exception:
            raise ServiceError(400, "invalid_config", "body must be a JSON object") from None
        session = mgr.create(payload)
        return {"id": session.id, "phase": session.phase}

    @app.get("/sessions/{session_id}")
    async def get_state(session_id: str):
        return mgr.get(session_id).snapshot()

    @app.get("/sessions/{session_id}/pending")
    async def get_pending(session_id: str):
        return {"pending": mgr.get(session_id).pending_batch()}

    @app.post("/sessions/{session_id}/scores")
    async def submit_scores(session_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ServiceError(400, "invalid_scores", "body must be a JSON object") from None
        scores = body.get("scores") if isinstance(body, dict) else None
        mgr.get(session_id).submit(scores)
        return {"phase": PHASE_RUNNING}

    @app.post("/sessions/{session_id}/abort")
    async def abort(session_id: str):
        mgr.get(session_id).abort()
        return {"phase": PHASE_ABORTED}

    @app.get("/sessions/{session_id}/events")
    async def events(session_id: str):
        session = mgr.get(session_id)

        def stream():
            last_version = -1
            while True:
                with session.lock:
                    version, phase = session.version, session.phase
                if version != last_version:
                    last_version = version
                    yield f"event: phase\ndata: {json.dumps({'phase': phase})}\n\n"
                    if phase in (PHASE_FINISHED, PHASE_ABORTED):
                        return
                else:
                    yield ": keepalive\n\n"  # yield every poll so closes propagate
                time.sleep(0.2)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
