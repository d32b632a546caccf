"""HTTP query surface and the server-push event stream.

All bodies use the trajectory record grammar (key=value, one record per
line); the stream frames each record as a server-sent event whose data line
is that same record, with ``replay=true`` appended for replay-session events.
Idle streams carry a comment heartbeat so proxies and clients see liveness.
"""

from __future__ import annotations

import math
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import TYPE_CHECKING
from urllib.parse import parse_qsl, urlparse

from ..errors import ReplayActiveError, ValidationError
from ..storage import ReplayClock, format_track_point, query_log

if TYPE_CHECKING:
    from .app import Service


def make_http_server(service: "Service") -> ThreadingHTTPServer:
    class Handler(_ApiHandler):
        pass

    Handler.service = service
    server = ThreadingHTTPServer(service.config.api_listen, Handler)
    server.daemon_threads = True
    return server


class _ApiHandler(BaseHTTPRequestHandler):
    service: "Service"
    protocol_version = "HTTP/1.1"

    # silence per-request stderr lines
    def log_message(self, fmt: str, *args) -> None:
        pass

    def _send_text(self, status: int, body: str) -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "text/plain; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if parts == ["assets"]:
                self._get_assets()
            elif len(parts) == 3 and parts[0] == "assets" and parts[2] == "track":
                self._get_track(parts[1], dict(parse_qsl(url.query)))
            elif parts == ["stream"]:
                self._get_stream()
            elif parts == ["health"]:
                self._get_health()
            else:
                self._send_text(404, "error=not_found\n")
        except BrokenPipeError:
            pass

    def do_POST(self) -> None:  # noqa: N802
        url = urlparse(self.path)
        if url.path.rstrip("/") != "/replay":
            self._send_text(404, "error=not_found\n")
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length).decode("utf-8", errors="replace")
        fields = {}
        for token in body.split():
            key, sep, value = token.partition("=")
            if sep:
                fields[key] = value
        try:
            clock = ReplayClock(
                start_ts=int(fields["from"]),
                end_ts=int(fields["to"]),
                rate=float(fields.get("rate", "inf")),
            )
        except (KeyError, ValueError, ValidationError) as exc:
            self._send_text(400, f"error=bad_request detail={type(exc).__name__}\n")
            return
        try:
            self.service.start_replay(clock)
        except ReplayActiveError:
            self._send_text(409, "error=replay_active\n")
            return
        rate = "inf" if math.isinf(clock.rate) else repr(clock.rate)
        self._send_text(200, f"replay=started from={clock.start_ts} to={clock.end_ts} rate={rate}\n")

    def _get_assets(self) -> None:
        lines = "".join(format_track_point(p) + "\n" for p in self.service.tracker.snapshot())
        self._send_text(200, lines)

    def _get_track(self, asset_id: str, params: dict[str, str]) -> None:
        known = {p.asset.id for p in self.service.tracker.snapshot()}
        known.update(a.id for a in self.service.bindings.all_assets())
        if asset_id not in known:
            self._send_text(404, "error=unknown_asset\n")
            return
        try:
            from_ts = int(params.get("from", "0"))
            to_ts = int(params["to"]) if "to" in params else None
            if to_ts is not None and from_ts > to_ts:
                raise ValueError("from exceeds to")
        except ValueError:
            self._send_text(400, "error=bad_range\n")
            return
        records = [
            p
            for p in query_log(self.service.config.log_path, from_ts=from_ts, to_ts=to_ts)
            if p.asset.id == asset_id
        ]
        self._send_text(200, "".join(format_track_point(p) + "\n" for p in records))

    def _get_health(self) -> None:
        body = "".join(f"{k}={v}\n" for k, v in sorted(self.service.health().items()))
        self._send_text(200, body)

    def _get_stream(self) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        sub = self.service.hub.subscribe()
        heartbeat = self.service.config.heartbeat_s
        try:
            while True:
                try:
                    event = sub.get(timeout=heartbeat)
                except StopIteration:
                    break
                if event is None:
                    if sub.dropped:  # overflowed and already detached from the hub
                        break
                    self.wfile.write(b": heartbeat\n\n")
                    self.wfile.flush()
                    continue
                line = format_track_point(event.point)
                if event.replay:
                    line += " replay=true"
                self.wfile.write(f"data: {line}\n\n".encode("utf-8"))
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            self.service.hub.unsubscribe(sub)
