"""HTTP service: session lifecycle, evaluation, files, and plot documents.

JSON over HTTP under /v1.  Sessions are identified by unguessable ids and
evaluated under a per-session lock, so concurrent requests against one
session serialize while distinct sessions proceed in parallel.
"""

import secrets
import threading
import time

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import runtime
from .errors import MathparError, PayloadTooLarge, UnknownSession

MAX_SOURCE_BYTES = 1_000_000
MAX_FILE_BYTES = 5_000_000
SESSION_TTL = 3600.0


class EvalRequest(BaseModel):
    src: str
    window: str | None = None


class _Entry:
    __slots__ = ("session", "lock", "created", "touched")

    def __init__(self, session):
        self.session = session
        self.lock = threading.Lock()
        self.created = time.monotonic()
        self.touched = self.created


class SessionStore:
    def __init__(self, ttl=SESSION_TTL):
        self.ttl = ttl
        self._entries = {}
        self._lock = threading.Lock()

    def create(self):
        sid = secrets.token_urlsafe(24)          # 192 bits of entropy
        with self._lock:
            self._entries[sid] = _Entry(runtime.Session(seed=secrets.randbits(64)))
        return sid

    def drop(self, sid):
        with self._lock:
            if self._entries.pop(sid, None) is None:
                raise UnknownSession(f"no session {sid!r}")

    def get(self, sid):
        with self._lock:
            self._expire()
            entry = self._entries.get(sid)
            if entry is None:
                raise UnknownSession(f"no session {sid!r}")
            entry.touched = time.monotonic()
            return entry

    def find_plot(self, ref):
        with self._lock:
            for entry in self._entries.values():
                doc = entry.session.plots.get(ref)
                if doc is not None:
                    return doc
        return None

    def _expire(self):
        now = time.monotonic()
        stale = [sid for sid, e in self._entries.items()
                 if now - e.touched > self.ttl]
        for sid in stale:
            del self._entries[sid]


def create_app(store=None):
    store = store or SessionStore()
    app = FastAPI(title="mathpar", version="1")
    app.state.store = store

    @app.exception_handler(MathparError)
    async def _mathpar_error(request, exc):
        status = 404 if isinstance(exc, UnknownSession) else \
            413 if isinstance(exc, PayloadTooLarge) else 422
        return JSONResponse(status_code=status,
                            content={"error": {"type": type(exc).__name__,
                                               "message": str(exc)}})

    @app.post("/v1/sessions", status_code=201)
    def create_session():
        return {"id": store.create()}

    @app.delete("/v1/sessions/{sid}")
    def drop_session(sid: str):
        store.drop(sid)
        return {"dropped": sid}

    @app.post("/v1/sessions/{sid}/eval")
    def eval_source(sid: str, req: EvalRequest):
        if len(req.src.encode("utf-8")) > MAX_SOURCE_BYTES:
            raise PayloadTooLarge("source text exceeds the size limit")
        entry = store.get(sid)
        with entry.lock:
            outcome = runtime.evaluate(entry.session, req.src)
        return {
            "results": [{"statement": r.index, "plain": r.plain,
                         "latex": r.latex, "plot": r.plot_ref}
                        for r in outcome.results],
            "transcript": outcome.transcript,
            "plots": outcome.plot_refs,
            "error": outcome.error,
        }

    @app.put("/v1/sessions/{sid}/files/{name}")
    async def put_file(sid: str, name: str, request: Request):
        body = await request.body()
        if len(body) > MAX_FILE_BYTES:
            raise PayloadTooLarge("file exceeds the size limit")
        entry = store.get(sid)
        with entry.lock:
            entry.session.write_file(name, body.decode("utf-8"))
        return {"stored": name}

    @app.get("/v1/sessions/{sid}/files/{name}")
    def get_file(sid: str, name: str):
        entry = store.get(sid)
        with entry.lock:
            content = entry.session.read_file(name)
        return Response(content=content, media_type="text/plain; charset=utf-8")

    @app.get("/v1/sessions/{sid}/files")
    def list_files(sid: str):
        entry = store.get(sid)
        with entry.lock:
            return {"files": entry.session.list_files()}

    @app.get("/v1/plots/{ref}")
    def get_plot(ref: str):
        doc = store.find_plot(ref)
        if doc is None:
            return JSONResponse(status_code=404,
                                content={"error": {"type": "UnknownPlot",
                                                   "message": f"no plot {ref!r}"}})
        return doc

    return app
