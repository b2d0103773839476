"""HTTP driving adapter on the standard library's threading server."""

from __future__ import annotations

import dataclasses
import json
import logging
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Sequence
from urllib.parse import parse_qsl, unquote, urlsplit

from seawatch.ports import BadRequest, NotFound, Route, StartupError, Web

log = logging.getLogger(__name__)

_PLACEHOLDER = re.compile(r"\{([a-z_][a-z0-9_]*)\}")


def _compile(path: str) -> re.Pattern:
    pattern, last = "", 0
    for m in _PLACEHOLDER.finditer(path):
        pattern += re.escape(path[last : m.start()]) + f"(?P<{m.group(1)}>[^/]+)"
        last = m.end()
    return re.compile(pattern + re.escape(path[last:]))


def _jsonable(result: Any) -> Any:
    if dataclasses.is_dataclass(result) and not isinstance(result, type):
        return dataclasses.asdict(result)
    return result


@dataclasses.dataclass
class ServerHandle:
    server: ThreadingHTTPServer
    thread: threading.Thread

    @property
    def address(self) -> tuple[str, int]:
        host, port = self.server.server_address[:2]
        return host, port


class HttpWeb(Web):
    def bind(self, routes: Sequence[Route], listen: str) -> ServerHandle:
        table = [(route.method.upper(), _compile(route.path), route) for route in routes]

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt: str, *args: Any) -> None:
                log.debug("%s %s", self.address_string(), fmt % args)

            def _send(self, status: int, body: bytes, content_type: str) -> None:
                self.send_response(status)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def _json(self, status: int, doc: Any) -> None:
                self._send(status, json.dumps(doc).encode(), "application/json")

            def _dispatch(self, method: str) -> None:
                url = urlsplit(self.path)
                path = unquote(url.path)
                allowed = False
                for route_method, pattern, route in table:
                    m = pattern.fullmatch(path)
                    if not m:
                        continue
                    if route_method != method:
                        allowed = True
                        continue
                    query = dict(parse_qsl(url.query, keep_blank_values=True))
                    try:
                        result = route.handler(m.groupdict(), query)
                    except BadRequest as exc:
                        return self._json(400, {"error": str(exc)})
                    except NotFound as exc:
                        return self._json(404, {"error": str(exc)})
                    except Exception:
                        log.exception("handler for %s failed", route.path)
                        return self._json(500, {"error": "internal error"})
                    if isinstance(result, str):
                        return self._send(200, result.encode(), "text/plain; version=0.0.4")
                    return self._json(200, _jsonable(result))
                if allowed:
                    return self._json(405, {"error": "method not allowed"})
                self._json(404, {"error": "not found"})

            def do_GET(self) -> None:
                self._dispatch("GET")

            def do_POST(self) -> None:
                self._dispatch("POST")

        host, _, port = listen.rpartition(":")
        try:
            server = ThreadingHTTPServer((host or "127.0.0.1", int(port)), Handler)
        except (OSError, ValueError) as exc:
            raise StartupError(f"cannot listen on {listen}: {exc}") from exc
        server.daemon_threads = True
        thread = threading.Thread(target=server.serve_forever, name=f"http-{listen}", daemon=True)
        thread.start()
        return ServerHandle(server, thread)

    def shutdown(self, handle: ServerHandle) -> None:
        handle.server.shutdown()
        handle.server.server_close()
        handle.thread.join(timeout=5)
