"""HTTP JSON facade over the translation engine.

Endpoints: POST /api/translate, GET /api/pictograms/{id}, GET /api/health,
POST /api/eval/tpa. Sessions are opaque tokens; concurrent requests on the
same session are serialized by a per-session lock.
"""
from __future__ import annotations

import io
import json
import logging
import signal
import threading
import time
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import unquote, urlparse

from .nlu import SessionContext
from .pipeline import EmptyInputError, Engine
from .tpa import CorpusFormatError, load_tpa_corpus, run_case_matrix

log = logging.getLogger("pictopipe.service")

_CONTENT_TYPES = {
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".jpg": "image/jpeg",
    ".jpeg": "image/jpeg",
    ".gif": "image/gif",
}


class SessionStore:
    """Token -> (context, lock) with idle expiry."""

    def __init__(self, capacity: int, ttl: float):
        self._capacity = capacity
        self._ttl = ttl
        self._guard = threading.Lock()
        self._sessions: dict[str, tuple[SessionContext, threading.Lock, float]] = {}

    def acquire(self, token: Optional[str]) -> tuple[str, SessionContext, threading.Lock]:
        now = time.monotonic()
        with self._guard:
            expired = [t for t, (_, _, seen) in self._sessions.items() if now - seen > self._ttl]
            for t in expired:
                del self._sessions[t]
            if token and token in self._sessions:
                ctx, lock, _ = self._sessions[token]
                self._sessions[token] = (ctx, lock, now)
                return token, ctx, lock
            new_token = uuid.uuid4().hex
            ctx = SessionContext(self._capacity)
            lock = threading.Lock()
            self._sessions[new_token] = (ctx, lock, now)
            return new_token, ctx, lock

    def __len__(self) -> int:
        with self._guard:
            return len(self._sessions)


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, handler, engine: Engine, allow_local_eval: bool = False):
        super().__init__(address, handler)
        self.engine = engine
        self.allow_local_eval = allow_local_eval
        self.sessions = SessionStore(
            engine.config.session_capacity, engine.config.session_ttl
        )


class _Handler(BaseHTTPRequestHandler):
    server: ApiServer  # type: ignore[assignment]
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # route access noise to debug logging
        log.debug("%s - %s", self.address_string(), fmt % args)

    def _send_json(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_bytes(self, code: int, data: bytes, content_type: str) -> None:
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _read_json(self) -> Optional[dict]:
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            return None
        if length <= 0:
            return None
        raw = self.rfile.read(length)
        try:
            obj = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return None
        return obj if isinstance(obj, dict) else None

    def do_OPTIONS(self):  # CORS preflight for the browser UI
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        path = urlparse(self.path).path
        if path == "/api/health":
            self._send_json(200, {"status": "ok", "lexicon_entries": len(self.server.engine.lexicon)})
            return
        if path.startswith("/api/pictograms/"):
            self._serve_pictogram(unquote(path[len("/api/pictograms/") :]))
            return
        self._send_json(404, {"error": f"no such path: {path}"})

    def _serve_pictogram(self, entry_id: str) -> None:
        engine = self.server.engine
        entry = engine.lexicon.by_id.get(entry_id)
        if entry is None:
            self._send_json(404, {"error": f"unknown pictogram id {entry_id!r}"})
            return
        ref = entry.image_ref
        if ref.startswith(("http://", "https://")):
            self.send_response(302)
            self.send_header("Location", ref)
            self.send_header("Content-Length", "0")
            self.end_headers()
            return
        root = engine.asset_root.resolve()
        target = (root / ref).resolve()
        if root not in target.parents and target != root:
            self._send_json(404, {"error": "image ref escapes the asset root"})
            return
        if not target.is_file():
            self._send_json(404, {"error": f"image file missing for {entry_id!r}"})
            return
        content_type = _CONTENT_TYPES.get(target.suffix.lower(), "application/octet-stream")
        self._send_bytes(200, target.read_bytes(), content_type)

    def do_POST(self):
        path = urlparse(self.path).path
        if path == "/api/translate":
            self._handle_translate()
        elif path == "/api/eval/tpa":
            self._handle_eval_tpa()
        else:
            self._send_json(404, {"error": f"no such path: {path}"})

    def _handle_translate(self) -> None:
        body = self._read_json()
        if body is None:
            self._send_json(400, {"error": "request body must be a JSON object"})
            return
        text = body.get("text")
        if not isinstance(text, str):
            self._send_json(400, {"error": "'text' must be a string"})
            return
        token_in = body.get("session")
        token, ctx, lock = self.server.sessions.acquire(
            token_in if isinstance(token_in, str) else None
        )
        try:
            with lock:  # one in-flight utterance per session
                result = self.server.engine.process(text, ctx)
        except EmptyInputError as exc:
            self._send_json(400, {"error": str(exc), "session": token})
            return
        payload = result.to_dict(self.server.engine.lexicon)
        payload["session"] = token
        self._send_json(200, payload)

    def _handle_eval_tpa(self) -> None:
        body = self._read_json()
        if body is None:
            self._send_json(400, {"error": "request body must be a JSON object"})
            return
        corpus_text = body.get("corpus")
        corpus_path = body.get("path")
        if isinstance(corpus_path, str):
            if not self.server.allow_local_eval:
                self._send_json(403, {"error": "local path evaluation is disabled"})
                return
            path = Path(corpus_path)
            if not path.is_file():
                self._send_json(400, {"error": f"corpus file not found: {corpus_path}"})
                return
            corpus_text = path.read_text(encoding="utf-8")
        if not isinstance(corpus_text, str):
            self._send_json(400, {"error": "provide 'corpus' (inline JSONL) or 'path'"})
            return
        epsilon = body.get("epsilon", 1e-9)
        mode = body.get("mode", "lenient")
        try:
            samples = load_tpa_corpus(io.StringIO(corpus_text))
            predict_tp, predict_ne = self.server.engine.tpa_predictors()
            matrix = run_case_matrix(
                samples,
                predict_tp,
                predict_ne,
                epsilon=float(epsilon),
                match_mode=str(mode),
                resources=self.server.engine.resources,
            )
        except (CorpusFormatError, ValueError) as exc:
            self._send_json(400, {"error": str(exc)})
            return
        self._send_json(200, matrix.to_dict())


def create_server(
    engine: Engine,
    host: Optional[str] = None,
    port: Optional[int] = None,
    allow_local_eval: bool = False,
) -> ApiServer:
    address = (
        host if host is not None else engine.config.host,
        port if port is not None else engine.config.port,
    )
    return ApiServer(address, _Handler, engine, allow_local_eval=allow_local_eval)


def run_server(server: ApiServer) -> None:
    """Serve until SIGINT/SIGTERM, then shut down cleanly."""
    stop = threading.Event()

    def request_stop(signum, frame):
        stop.set()

    previous = {}
    for sig in (signal.SIGINT, signal.SIGTERM):
        previous[sig] = signal.signal(sig, request_stop)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        while not stop.wait(0.2):
            pass
    finally:
        server.shutdown()
        thread.join()
        server.server_close()
        for sig, handler in previous.items():
            signal.signal(sig, handler)
