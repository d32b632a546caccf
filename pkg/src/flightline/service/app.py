"""The runnable service: ingest pipeline, event stream hub, replay sessions.

Layout mirrors the deployment: a UDP listener accepts gateway-wrapped frames,
the network server dedups them, the tracker commits track points to the log,
and every commit fans out to stream subscribers. Replay sessions re-emit
logged records onto the same stream, tagged, without touching the tracker.

Slow stream consumers are disconnected rather than allowed to stall the
commit path: each subscription has a bounded queue and overflow closes it.
"""

from __future__ import annotations

import math
import queue
import socket
import threading
from dataclasses import dataclass
from typing import Optional

from ..errors import ReplayActiveError, ScenarioError
from ..geodesy import FrameOrigin
from ..lorawan.network import NetworkServer
from ..storage import ReplayClock, TrajectoryLog, format_track_point, replay
from ..tracker import BindingTable, TrackPoint, Tracker, load_bindings
from .config import ServiceConfig, load_camera_rigs
from .scenario import Scenario, load_scenario
from .sim import SimulationSummary, simulate

STREAM_QUEUE_LIMIT = 1024

_CLOSE = object()


@dataclass(frozen=True)
class StreamEvent:
    point: TrackPoint
    replay: bool


class Subscription:
    def __init__(self, limit: int = STREAM_QUEUE_LIMIT):
        self._q: queue.Queue = queue.Queue(maxsize=limit)
        self.dropped = False

    def get(self, timeout: float) -> Optional[StreamEvent]:
        """Next event, None on heartbeat timeout; raises StopIteration when closed."""
        try:
            item = self._q.get(timeout=timeout)
        except queue.Empty:
            return None
        if item is _CLOSE:
            raise StopIteration
        return item

    def _offer(self, event: StreamEvent) -> bool:
        try:
            self._q.put_nowait(event)
            return True
        except queue.Full:
            self.dropped = True
            try:
                self._q.put_nowait(_CLOSE)
            except queue.Full:
                pass
            return False

    def close(self) -> None:
        try:
            self._q.put_nowait(_CLOSE)
        except queue.Full:
            pass


class StreamHub:
    """Fan-out of committed (and replayed) track points to any number of consumers."""

    def __init__(self) -> None:
        self._subs: list[Subscription] = []
        self._lock = threading.Lock()

    def subscribe(self, limit: int = STREAM_QUEUE_LIMIT) -> Subscription:
        sub = Subscription(limit)
        with self._lock:
            self._subs.append(sub)
        return sub

    @property
    def subscriber_count(self) -> int:
        with self._lock:
            return len(self._subs)

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)

    def publish(self, point: TrackPoint, replay_tag: bool = False) -> None:
        event = StreamEvent(point, replay_tag)
        with self._lock:
            alive = []
            for sub in self._subs:
                if sub._offer(event):
                    alive.append(sub)
            self._subs = alive

    def close_all(self) -> None:
        with self._lock:
            for sub in self._subs:
                sub.close()
            self._subs = []


class Service:
    """Composition root; construct, ``start()``, talk to it, ``stop()``."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.origin = FrameOrigin(config.origin)
        self.bindings: BindingTable = (
            load_bindings(config.bindings_path) if config.bindings_path else BindingTable()
        )
        self.log = TrajectoryLog(config.log_path)
        self.network_server = NetworkServer()
        self.tracker = Tracker(self.origin, self.bindings, sink=self.log.append)
        self.hub = StreamHub()
        self.tracker.add_observer(lambda p: self.hub.publish(p, replay_tag=False))
        self.cameras = list(load_camera_rigs(config.cameras_path)) if config.cameras_path else []
        for rig in self.cameras:
            self.tracker.register_camera(rig)
        self.scenario: Optional[Scenario] = (
            load_scenario(config.scenario_path) if config.scenario_path else None
        )
        self.sim_summary: Optional[SimulationSummary] = None
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._udp_sock: Optional[socket.socket] = None
        self._replay_lock = threading.Lock()
        self._replay_thread: Optional[threading.Thread] = None
        self._http_server = None

    # --- pipeline ---

    def handle_datagram(self, data: bytes) -> None:
        new_fix = self.network_server.ingest_datagram(data)
        if new_fix is not None:
            self.tracker.ingest_gps(new_fix)

    def health(self) -> dict[str, int]:
        counters = {f"server_{k}": v for k, v in self.network_server.counters.items()}
        counters.update({f"tracker_{k}": v for k, v in self.tracker.counters.items()})
        counters["replay_active"] = 1 if self.replay_active else 0
        return counters

    # --- replay sessions ---

    @property
    def replay_active(self) -> bool:
        t = self._replay_thread
        return t is not None and t.is_alive()

    def start_replay(self, clock: ReplayClock) -> None:
        with self._replay_lock:
            if self.replay_active:
                raise ReplayActiveError("a replay session is already active")

            def run() -> None:
                replay(
                    self.config.log_path,
                    clock,
                    lambda p: self.hub.publish(p, replay_tag=True),
                    should_stop=self._stop.is_set,
                )

            self._replay_thread = threading.Thread(target=run, name="replay", daemon=True)
            self._replay_thread.start()

    # --- lifecycle ---

    def start(self) -> None:
        if self.config.gateway_listen is not None:
            self._udp_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            self._udp_sock.bind(self.config.gateway_listen)
            self._udp_sock.settimeout(0.2)
            t = threading.Thread(target=self._udp_loop, name="gateway-udp", daemon=True)
            t.start()
            self._threads.append(t)
        from .http_api import make_http_server  # local import to avoid a cycle

        self._http_server = make_http_server(self)
        t = threading.Thread(target=self._http_server.serve_forever, name="api-http", daemon=True)
        t.start()
        self._threads.append(t)
        if self.scenario is not None:
            t = threading.Thread(target=self._run_scenario, name="simulation", daemon=True)
            t.start()
            self._threads.append(t)

    def _run_scenario(self) -> None:
        assert self.scenario is not None
        # the UDP listener shares this pipeline, so sim-local conservation
        # cannot be asserted here; headless `simulate` runs still verify
        self.sim_summary = simulate(
            self.scenario,
            self.tracker,
            self.network_server,
            self.cameras,
            speed=self.config.speed,
            stop_event=self._stop,
            verify=False,
        )

    def _udp_loop(self) -> None:
        assert self._udp_sock is not None
        while not self._stop.is_set():
            try:
                data, _addr = self._udp_sock.recvfrom(4096)
            except socket.timeout:
                continue
            except OSError:
                break
            self.handle_datagram(data)

    @property
    def udp_address(self) -> tuple[str, int]:
        if self._udp_sock is None:
            raise ScenarioError("gateway listener is not running")
        return self._udp_sock.getsockname()

    @property
    def api_address(self) -> tuple[str, int]:
        if self._http_server is None:
            raise ScenarioError("API server is not running")
        return self._http_server.server_address  # type: ignore[return-value]

    def stop(self) -> None:
        self._stop.set()
        self.hub.close_all()
        if self._http_server is not None:
            self._http_server.shutdown()
        if self._udp_sock is not None:
            self._udp_sock.close()
        for t in self._threads:
            t.join(timeout=5.0)
        if self._replay_thread is not None:
            self._replay_thread.join(timeout=5.0)
        self.log.close()

    def run_until_interrupt(self) -> None:
        """Block a started service until Ctrl-C (or stop()), then shut down."""
        try:
            while not self._stop.wait(timeout=0.5):
                pass
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()


def headless_replay(
    log_path,
    clock: ReplayClock,
    out_path,
) -> int:
    """CLI replay: re-emit in-range records into a sink file at the clock's pace."""
    emitted = 0
    with open(out_path, "w", encoding="ascii", newline="\n") as out:

        def sink(point: TrackPoint) -> None:
            nonlocal emitted
            out.write(format_track_point(point) + "\n")
            emitted += 1

        replay(log_path, clock, sink)
    return emitted


def batch_clock(from_ts: int, to_ts: int) -> ReplayClock:
    return ReplayClock(from_ts, to_ts, rate=math.inf)
