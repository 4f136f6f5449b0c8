"""Local stand-in for a chat-completion endpoint

Replies with canned assistant messages, cycling through them, and keeps
the request bodies it received. Run standalone with

    python -m proxyforge.designer.stub_server --port 8765 --reply-file reply.json
"""

import argparse
import json
import logging
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)

DEFAULT_REPLY = json.dumps(
    {
        "config": {"family": "DE", "mutation": "current-to-pbest", "p_best": 0.1, "F": "adaptive", "CR": "adaptive"},
        "rationale": "success-history adaptation on a greedy mutation",
    }
)


def completion(content: str) -> Dict[str, Any]:
    """Wrap assistant text in a chat-completion body"""
    return {"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]}


class StubLLMServer:
    """Threaded HTTP server answering POSTs with canned replies

    Attributes:
        replies: Assistant messages, served in order and then cycled
        status: HTTP status of every answer
        requests: JSON bodies received so far
    """

    def __init__(
        self,
        replies: Optional[Sequence[str]] = None,
        status: int = 200,
        host: str = "127.0.0.1",
        port: int = 0,
        api_key: Optional[str] = None,
    ) -> None:
        self.replies: List[str] = list(replies or [DEFAULT_REPLY])
        self.status = status
        self.api_key = api_key
        self.requests: List[Dict[str, Any]] = []
        self._count = 0
        self._lock = threading.Lock()
        self._httpd = ThreadingHTTPServer((host, port), self._handler_class())
        self._thread: Optional[threading.Thread] = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}/v1/chat/completions"

    def _next_reply(self, body: Dict[str, Any]) -> str:
        with self._lock:
            self.requests.append(body)
            reply = self.replies[self._count % len(self.replies)]
            self._count += 1
        return reply

    def _handler_class(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length)
                if server.api_key is not None and self.headers.get("Authorization") != f"Bearer {server.api_key}":
                    self._send(401, {"error": "unauthorized"})
                    return
                try:
                    body = json.loads(raw or b"{}")
                except json.JSONDecodeError:
                    self._send(400, {"error": "invalid json"})
                    return
                reply = server._next_reply(body)
                if server.status != 200:
                    self._send(server.status, {"error": "stub failure"})
                    return
                self._send(200, completion(reply))

            def _send(self, status: int, payload: Dict[str, Any]) -> None:
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, format: str, *args: Any) -> None:
                logger.debug("stub: " + format, *args)

        return Handler

    def start(self) -> "StubLLMServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._thread is not None:
            self._httpd.shutdown()
            self._thread.join()
            self._thread = None
        self._httpd.server_close()

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def __enter__(self) -> "StubLLMServer":
        return self.start()

    def __exit__(self, *exc: Any) -> None:
        self.stop()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Serve canned chat-completion replies")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--reply-file", help="File whose text is returned as the assistant message")
    parser.add_argument("--status", type=int, default=200, help="HTTP status of every answer")
    args = parser.parse_args(argv)

    replies = None
    if args.reply_file:
        try:
            with open(args.reply_file, encoding="utf-8") as f:
                replies = [f.read()]
        except OSError as e:
            print(f"Error: {e}", file=sys.stderr)
            return 1
    server = StubLLMServer(replies, args.status, args.host, args.port)
    print(f"Serving: {server.url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
