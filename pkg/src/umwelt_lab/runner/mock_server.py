"""In-process mock chat endpoint for tests and offline demos.

The server speaks both wire shapes the client knows (``/chat/completions`` and
``/messages``). A responder callable decides each reply; it receives the
parsed request and the 0-based call index for that exact request body.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable


@dataclass
class Reply:
    """Explicit reply: a status code plus either completion text or a raw body."""

    status: int = 200
    text: str | None = None
    raw: str | None = None
    delay: float = 0.0


Responder = Callable[[dict, int], "str | Reply"]


def _system_and_user(path: str, body: dict) -> tuple[str, str]:
    if path.endswith("/messages"):
        return body.get("system", ""), body["messages"][-1]["content"]
    msgs = body.get("messages", [])
    system = next((m["content"] for m in msgs if m["role"] == "system"), "")
    user = next((m["content"] for m in msgs if m["role"] == "user"), "")
    return system, user


def _wrap(path: str, model: str, text: str) -> dict:
    if path.endswith("/messages"):
        return {"type": "message", "model": model, "content": [{"type": "text", "text": text}]}
    return {"model": model, "choices": [{"index": 0, "message": {"role": "assistant", "content": text}}]}


class MockModelServer:
    def __init__(self, responder: Responder, host: str = "127.0.0.1", port: int = 0):
        self.responder = responder
        self.calls: Counter[tuple] = Counter()
        self.requests: list[dict] = []
        self._lock = threading.Lock()
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length) or b"{}")
                system, user = _system_and_user(self.path, body)
                ident = (self.path, body.get("model"), system, user, body.get("temperature"))
                with server._lock:
                    index = server.calls[ident]
                    server.calls[ident] += 1
                    server.requests.append({"path": self.path, "headers": dict(self.headers), "body": body})
                reply = server.responder({"path": self.path, "system": system, "user": user, **body}, index)
                if isinstance(reply, str):
                    reply = Reply(text=reply)
                if reply.delay:
                    threading.Event().wait(reply.delay)
                if reply.raw is not None:
                    payload = reply.raw.encode("utf-8")
                else:
                    payload = json.dumps(_wrap(self.path, body.get("model", ""), reply.text or "")).encode()
                self.send_response(reply.status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._httpd.daemon_threads = True
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def total_calls(self) -> int:
        with self._lock:
            return sum(self.calls.values())

    def start(self) -> MockModelServer:
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self) -> MockModelServer:
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def echo_answer(letter: str = "B") -> Responder:
    """Responder that always commits to ``letter``."""
    return lambda request, index: f"Working through it.\nAnswer: {letter}"

