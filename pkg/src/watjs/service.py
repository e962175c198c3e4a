"""HTTP JSON API over the engine: /api/v1/{eval,wat,explain,misconceptions,diagnose}.

The HTTP layer adds no semantics: every endpoint is a projection of the
library calls, so identical requests produce byte-identical payloads.
Sessions are in-memory, isolated by id, and exportable as JSONL.
"""

from __future__ import annotations

import json
import math
import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import diagnostics, inference, misconceptions
from .config import Config
from .explain import explain as render_explanation
from .inference import UnknownExpectationError
from .misconceptions import EMPTY, MisconceptionSet, PriorModel
from .parser import JsSyntaxError, parse
from .semantics import evaluate
from .values import (
    JsArray,
    JsBoolean,
    JsError,
    JsNull,
    JsNumber,
    JsObject,
    JsString,
    JsUndefined,
    JsValue,
    display,
    number_to_string,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def value_to_json(v: JsValue) -> dict:
    if isinstance(v, JsUndefined):
        return {"type": "undefined"}
    if isinstance(v, JsNull):
        return {"type": "null"}
    if isinstance(v, JsBoolean):
        return {"type": "boolean", "value": v.value}
    if isinstance(v, JsNumber):
        # NaN and the infinities are not JSON numbers; send the JS spelling.
        if math.isnan(v.value) or math.isinf(v.value):
            return {"type": "number", "value": number_to_string(v.value)}
        return {"type": "number", "value": v.value}
    if isinstance(v, JsString):
        return {"type": "string", "value": v.value}
    if isinstance(v, JsArray):
        return {"type": "array", "elements": [value_to_json(e) for e in v.elems]}
    if isinstance(v, JsObject):
        return {
            "type": "object",
            "properties": [
                {"key": k, "value": value_to_json(val)} for k, val in v.props
            ],
        }
    if isinstance(v, JsError):
        return {"type": "error", "kind": v.kind}
    raise TypeError(f"not a JsValue: {v!r}")


@dataclass
class Session:
    session_id: str
    history: list[dict] = field(default_factory=list)

    def record(self, interaction: dict) -> None:
        self.history.append(interaction)


class Engine:
    """Library facade used by both the HTTP service and the CLI."""

    def __init__(self, config: Config | None = None):
        self.config = config or Config()
        self.prior = PriorModel.uniform(self.config.q).with_overrides(
            self.config.q_overrides
        )

    def _parse(self, source: str):
        if not source or not source.strip():
            raise ApiError(422, "empty_source", "source must be a nonempty program")
        try:
            return parse(source)
        except JsSyntaxError as err:
            raise ApiError(
                400, "parse_error", f"{err.message} (at offset {err.position})"
            ) from err

    def eval_source(self, source: str) -> dict:
        program = self._parse(source)
        outcome = evaluate(program)
        return {
            "display": display(outcome.result),
            "value_json": value_to_json(outcome.result),
        }

    def wat(self, source: str) -> dict:
        program = self._parse(source)
        cands = inference.infer_all(
            program, self.prior, self.config.kappa, self.config.max_candidates
        )
        if not cands:
            return {"candidates": [], "question": None}
        clar = inference.clarify(cands)
        return {
            "candidates": [
                {
                    "expected_display": cand.expected_display,
                    "misconception_ids": list(cand.m),
                    "prior_rank": cand.rank,
                }
                for _, cand in clar.entries
            ],
            "question": clar.question,
        }

    def explain_source(
        self,
        source: str,
        expected_display: str,
        candidate_rank: int | None = None,
    ) -> dict:
        program = self._parse(source)
        cands = inference.infer_all(
            program, self.prior, self.config.kappa, self.config.max_candidates
        )
        try:
            cand = inference.resolve_display(cands, expected_display)
        except UnknownExpectationError as err:
            # The rank from the wat payload doubles as a candidate id, so a
            # client whose display text got mangled can still resolve.
            by_rank = {c.rank: c for c in cands}
            if candidate_rank in by_rank:
                cand = inference.resolve(cands, by_rank[candidate_rank].expected)
            else:
                raise ApiError(404, "unknown_expectation", str(err)) from err
        ex = render_explanation(program, cand)
        payload = ex.to_json()
        payload["misconception_ids"] = list(cand.m)
        return payload

    def misconceptions(self) -> list[dict]:
        return misconceptions.registry_json()

    def diagnose(self, misconception_id: int, budget: int | None = None) -> dict:
        if not 1 <= misconception_id <= misconceptions.N_FLAGS:
            raise ApiError(
                404, "unknown_misconception", f"no misconception {misconception_id}"
            )
        budget = self.config.diag_budget if budget is None else budget
        report = diagnostics._synthesize(
            misconception_id, budget, self.config.kappa_v, EMPTY
        )
        if report.question is None:
            return {
                "misconception": misconception_id,
                "ok": False,
                "reason": report.reason,
                "elapsed_ms": round(report.elapsed_ms, 3),
            }
        out = report.question.to_json()
        out["ok"] = True
        return out


# Budgets above this run as polled background jobs instead of inline.
_INLINE_BUDGET = 5


class _Jobs:
    def __init__(self):
        self._pool = ThreadPoolExecutor(max_workers=4)
        self._jobs: dict[str, Future] = {}
        self._lock = threading.Lock()

    def submit(self, fn) -> str:
        token = uuid.uuid4().hex
        with self._lock:
            self._jobs[token] = self._pool.submit(fn)
        return token

    def poll(self, token: str) -> tuple[str, dict | None]:
        with self._lock:
            fut = self._jobs.get(token)
        if fut is None:
            raise ApiError(404, "unknown_job", f"no diagnose job {token}")
        if not fut.done():
            return "pending", None
        return "done", fut.result()


class AppState:
    def __init__(self, config: Config | None = None):
        self.engine = Engine(config)
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.jobs = _Jobs()

    def session(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self.sessions:
                self.sessions[session_id] = Session(session_id)
            return self.sessions[session_id]


def _envelope_ok(payload) -> dict:
    return {"ok": True, "payload": payload}


def _envelope_err(code: str, message: str) -> dict:
    return {"ok": False, "error": {"code": code, "message": message}}


class ApiHandler(BaseHTTPRequestHandler):
    state: AppState  # assigned by make_server
    protocol_version = "HTTP/1.1"

    # -- plumbing ---------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, body: dict) -> None:
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(data)

    def _send_text(self, status: int, text: str, content_type: str) -> None:
        data = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ApiError(400, "bad_request", "request body must be JSON")
        try:
            body = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as err:
            raise ApiError(400, "bad_request", f"invalid JSON body: {err}") from err
        if not isinstance(body, dict):
            raise ApiError(400, "bad_request", "JSON body must be an object")
        return body

    def do_OPTIONS(self):
        # 204 carries no body.
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- routing ----------------------------------------------------------

    def do_GET(self):
        try:
            self._route_get()
        except ApiError as err:
            self._send(err.status, _envelope_err(err.code, err.message))

    def do_POST(self):
        try:
            self._route_post()
        except ApiError as err:
            self._send(err.status, _envelope_err(err.code, err.message))

    def _route_get(self):
        path = self.path.split("?", 1)[0].rstrip("/")
        if path == "/api/v1/misconceptions":
            self._send(200, _envelope_ok(self.state.engine.misconceptions()))
            return
        if path.startswith("/api/v1/diagnose/"):
            token = path.rsplit("/", 1)[1]
            status, result = self.state.jobs.poll(token)
            if status == "pending":
                self._send(202, _envelope_ok({"status": "pending", "job": token}))
            else:
                self._send(200, _envelope_ok({"status": "done", "result": result}))
            return
        if path.startswith("/api/v1/sessions/") and path.endswith("/export"):
            session_id = path[len("/api/v1/sessions/") : -len("/export")]
            session = self.state.session(session_id)
            lines = "\n".join(json.dumps(entry) for entry in session.history)
            self._send_text(200, lines + ("\n" if lines else ""), "application/jsonl")
            return
        raise ApiError(404, "not_found", f"no route {path}")

    def _route_post(self):
        path = self.path.split("?", 1)[0].rstrip("/")
        engine = self.state.engine
        if path == "/api/v1/eval":
            body = self._body()
            payload = engine.eval_source(body.get("source", ""))
            self._record(body, "eval", payload)
            self._send(200, _envelope_ok(payload))
            return
        if path == "/api/v1/wat":
            body = self._body()
            payload = engine.wat(body.get("source", ""))
            self._record(body, "wat", payload)
            self._send(200, _envelope_ok(payload))
            return
        if path == "/api/v1/explain":
            body = self._body()
            rank = body.get("candidate_rank")
            payload = engine.explain_source(
                body.get("source", ""),
                body.get("expected_display", ""),
                rank if isinstance(rank, int) else None,
            )
            self._record(body, "explain", payload)
            self._send(200, _envelope_ok(payload))
            return
        if path == "/api/v1/diagnose":
            body = self._body()
            mid = body.get("misconception_id")
            if not isinstance(mid, int):
                raise ApiError(400, "bad_request", "misconception_id must be an int")
            budget = body.get("budget")
            if budget is not None and not isinstance(budget, int):
                raise ApiError(400, "bad_request", "budget must be an int")
            effective = budget if budget is not None else engine.config.diag_budget
            if effective > _INLINE_BUDGET:
                token = self.state.jobs.submit(lambda: engine.diagnose(mid, budget))
                self._send(202, _envelope_ok({"status": "pending", "job": token}))
                return
            self._send(200, _envelope_ok(engine.diagnose(mid, budget)))
            return
        raise ApiError(404, "not_found", f"no route {path}")

    def _record(self, body: dict, kind: str, payload: dict) -> None:
        session_id = body.get("session_id")
        if isinstance(session_id, str) and session_id:
            self.state.session(session_id).record(
                {"kind": kind, "request": body, "payload": payload}
            )


def make_server(config: Config | None = None) -> ThreadingHTTPServer:
    config = config or Config()
    state = AppState(config)
    handler = type("BoundApiHandler", (ApiHandler,), {"state": state})
    server = ThreadingHTTPServer((config.host, config.port), handler)
    server.daemon_threads = True
    return server


def serve(config: Config | None = None) -> None:
    server = make_server(config)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}/api/v1")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
