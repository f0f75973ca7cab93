"""HTTP server speaking the wire protocol over any backend object."""

from __future__ import annotations

import json
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from model_server.toy import BadRequest

_ROUTES = {
    "/v1/generate": "Generate",
    "/v1/score_choices": "ScoreChoices",
    "/v1/token_nll": "TokenNll",
}
_REQUIRED_FIELDS = {
    "Generate": {"kind", "prompt", "max_new_tokens", "stop"},
    "ScoreChoices": {"kind", "prompt", "choices"},
    "TokenNll": {"kind", "text"},
}


def _make_handler(backend):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _reply(self, status: int, payload: dict) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path == "/v1/health":
                self._reply(200, {"status": "ok"})
            else:
                self._reply(404, {"error": f"no such endpoint: {self.path}"})

        def do_POST(self):
            kind = _ROUTES.get(self.path)
            if kind is None:
                self._reply(404, {"error": f"no such endpoint: {self.path}"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, UnicodeDecodeError) as exc:
                self._reply(400, {"error": f"bad JSON body: {exc}"})
                return
            if not isinstance(payload, dict) or set(payload) != _REQUIRED_FIELDS[kind] or payload.get("kind") != kind:
                self._reply(400, {"error": f"{kind} request must have exactly fields {sorted(_REQUIRED_FIELDS[kind])}"})
                return
            try:
                if kind == "Generate":
                    result = backend.generate(payload["prompt"], payload["max_new_tokens"], payload["stop"])
                elif kind == "ScoreChoices":
                    result = backend.score_choices(payload["prompt"], payload["choices"])
                else:
                    result = backend.token_nll(payload["text"])
            except BadRequest as exc:
                self._reply(400, {"error": str(exc)})
                return
            except Exception as exc:  # backend bug: surface as 500, keep serving
                self._reply(500, {"error": f"backend failure: {exc}"})
                return
            self._reply(200, result)

        def log_message(self, *args):
            pass

    return Handler


def serve(backend, host: str = "127.0.0.1", port: int = 8009) -> ThreadingHTTPServer:
    """Bind and return the server; call ``serve_forever()`` to run it."""
    return ThreadingHTTPServer((host, port), _make_handler(backend))


def run_forever(backend, host: str, port: int) -> int:
    try:
        server = serve(backend, host, port)
    except OSError as exc:
        print(f"model-server: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    print(f"model-server: listening on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
