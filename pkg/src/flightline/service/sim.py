"""Deterministic discrete-event simulation of devices, gateways and cameras.

Every event carries an integer simulated-millisecond timestamp and a
monotonically assigned sequence number; the heap pops them in (time, seq)
order, so two runs with the same scenario and seeds replay the identical
event sequence. Pacing (the ``speed`` factor) only stretches wall time
between events and never changes their order or timestamps.

Counter conservation, checked after every run:

    sent = forwarded + dropped               (offerings = uplinks x gateways)
    forwarded = new_fix + duplicates + decode_failures
"""

from __future__ import annotations

import heapq
import math
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import ValidationError
from ..fiducial.camera import Pose, project_tag
from ..fiducial.distance import DistanceQuery, max_detection_distance
from ..geodesy import geo_to_enu
from ..lorawan.airtime import DutyCycleGate, airtime_ms
from ..lorawan.codec import GpsFixPayload, UplinkFrame, encode_gps_fix, encode_uplink
from ..lorawan.network import Gateway, NetworkServer
from ..tracker import CameraRig, Tracker
from .scenario import Scenario

_FIX, _RX, _FRAME = 0, 1, 2


@dataclass
class SimulationSummary:
    uplinks_tx: int = 0
    sent: int = 0
    forwarded: int = 0
    dropped: int = 0
    new_fix: int = 0
    duplicates: int = 0
    decode_failures: int = 0
    fixes_committed: int = 0
    sightings_generated: int = 0
    sightings_committed: int = 0
    unbound: int = 0
    stale: int = 0
    degenerate_sightings: int = 0
    deferred_by_duty_cycle: int = 0
    sim_duration_s: float = 0.0

    def verify_conservation(self) -> None:
        if self.sent != self.forwarded + self.dropped:
            raise ValidationError(
                f"offer conservation broken: sent={self.sent} != forwarded={self.forwarded} + dropped={self.dropped}"
            )
        if self.forwarded != self.new_fix + self.duplicates + self.decode_failures:
            raise ValidationError(
                f"ingest conservation broken: forwarded={self.forwarded} != "
                f"new_fix={self.new_fix} + duplicates={self.duplicates} + decode_failures={self.decode_failures}"
            )

    def as_lines(self) -> str:
        pairs = " ".join(
            f"{k}={getattr(self, k)}"
            for k in (
                "uplinks_tx", "sent", "forwarded", "dropped", "new_fix", "duplicates",
                "decode_failures", "fixes_committed", "sightings_generated",
                "sightings_committed", "unbound", "stale", "degenerate_sightings",
                "deferred_by_duty_cycle",
            )
        )
        return pairs


def _billboard_pose(tag_enu: np.ndarray, camera_center: np.ndarray) -> Optional[Pose]:
    """Tag pose whose face points at the camera (decals read head-on)."""
    z = camera_center - tag_enu
    dist = np.linalg.norm(z)
    if dist < 1e-9:
        return None
    z = z / dist
    up = np.array([0.0, 0.0, 1.0])
    x = np.cross(up, z)
    n = np.linalg.norm(x)
    if n < 1e-9:  # camera straight above or below the tag
        x = np.array([1.0, 0.0, 0.0])
    else:
        x = x / n
    y = np.cross(z, x)
    return Pose(np.column_stack([x, y, z]), tag_enu)


class _DeviceState:
    def __init__(self) -> None:
        self.fcnt = 0
        self.gate = DutyCycleGate()


def simulate(
    scenario: Scenario,
    tracker: Tracker,
    server: NetworkServer,
    cameras: Optional[list[CameraRig]] = None,
    *,
    speed: float = math.inf,
    stop_event: Optional[threading.Event] = None,
    apply_detection_range: bool = True,
    verify: bool = True,
    now_fn: Callable[[], float] = time.monotonic,
    sleep_fn: Callable[[float], None] = time.sleep,
) -> SimulationSummary:
    """Run a scenario through the live ingest pipeline; fully seeded-deterministic.

    ``verify`` must be off when the pipeline concurrently ingests traffic from
    outside the scenario (the serve-mode UDP listener): the shared counters
    then include frames this run never sent.
    """
    cameras = cameras or []
    summary = SimulationSummary(sim_duration_s=scenario.duration_s)
    gateways = [Gateway(cfg) for cfg in scenario.gateways]
    devices = {d.dev_addr: _DeviceState() for d in scenario.devices}
    duration_ms = int(round(scenario.duration_s * 1000))
    start_ms = scenario.start_time_ms
    # the pipeline may be shared with a live service: report deltas, not totals
    server_base = dict(server.counters)
    tracker_base = dict(tracker.counters)

    heap: list[tuple[int, int, int, object]] = []
    seq = 0

    def push(t_ms: int, kind: int, payload: object) -> None:
        nonlocal seq
        heapq.heappush(heap, (t_ms, seq, kind, payload))
        seq += 1

    for device in scenario.devices:
        push(start_ms, _FIX, device)
    if cameras and scenario.aircraft:
        push(start_ms, _FRAME, None)

    wall0 = now_fn()
    paced = math.isfinite(speed) and speed > 0

    def pace(t_ms: int) -> None:
        if not paced:
            return
        target = wall0 + (t_ms - start_ms) / 1000.0 / speed
        while True:
            if stop_event is not None and stop_event.is_set():
                return
            remaining = target - now_fn()
            if remaining <= 0:
                return
            sleep_fn(min(remaining, 0.05))

    def handle_fix(t_ms: int, device) -> None:
        state = devices[device.dev_addr]
        t_s = (t_ms - start_ms) / 1000.0
        pos = device.position_at(t_s)
        fix = GpsFixPayload.from_geo(pos.lat_deg, pos.lon_deg, pos.alt_m, device.battery_pct)
        frame = UplinkFrame(device.dev_addr, state.fcnt, device.port, encode_gps_fix(fix))
        frame_bytes = encode_uplink(frame)
        toa = airtime_ms(scenario.radio, len(frame_bytes))
        allowed, next_allowed = state.gate.check(toa, t_ms)
        if not allowed:
            summary.deferred_by_duty_cycle += 1
            if next_allowed - start_ms <= duration_ms:
                push(next_allowed, _FIX, device)
            return
        state.gate.record(toa, t_ms)
        state.fcnt += 1
        summary.uplinks_tx += 1
        rx_ms = t_ms + math.ceil(toa)
        for gw in gateways:
            summary.sent += 1
            wrapped = gw.receive(pos, frame_bytes, rx_ms)
            if wrapped is None:
                summary.dropped += 1
            else:
                push(rx_ms, _RX, wrapped)
        next_fix = t_ms + int(round(device.fix_interval_s * 1000))
        if next_fix - start_ms <= duration_ms:
            push(next_fix, _FIX, device)

    def handle_frame(t_ms: int) -> None:
        t_s = (t_ms - start_ms) / 1000.0
        for rig in cameras:
            cam_center = rig.pose.translation
            for aircraft in scenario.aircraft:
                tag_geo = aircraft.position_at(t_s)
                enu = geo_to_enu(tag_geo, tracker.origin)
                tag_enu = np.array([enu.east_m, enu.north_m, enu.up_m])
                if apply_detection_range:
                    reach = max_detection_distance(
                        DistanceQuery(
                            t=aircraft.tag_size_m,
                            f=rig.intrinsics.hfov_rad,
                            r=rig.intrinsics.resolution_h,
                        )
                    )
                    if np.linalg.norm(tag_enu - cam_center) > reach:
                        continue
                pose = _billboard_pose(tag_enu, cam_center)
                if pose is None:
                    continue
                detection = project_tag(
                    rig.intrinsics, rig.pose, pose, aircraft.tag_size_m, tag_id=aircraft.tag_id
                )
                if detection is None:
                    continue
                summary.sightings_generated += 1
                tracker.ingest_sighting(detection, rig.camera_id, t_ms)
        next_frame = t_ms + int(round(scenario.frame_interval_s * 1000))
        if next_frame - start_ms <= duration_ms:
            push(next_frame, _FRAME, None)

    while heap:
        if stop_event is not None and stop_event.is_set():
            break
        t_ms, _, kind, payload = heapq.heappop(heap)
        pace(t_ms)
        if stop_event is not None and stop_event.is_set():
            break
        if kind == _FIX:
            handle_fix(t_ms, payload)
        elif kind == _RX:
            new_fix = server.ingest(payload)  # type: ignore[arg-type]
            if new_fix is not None:
                tracker.ingest_gps(new_fix)
        else:
            handle_frame(t_ms)

    summary.forwarded = server.counters["forwarded"] - server_base["forwarded"]
    summary.new_fix = server.counters["new_fix"] - server_base["new_fix"]
    summary.duplicates = server.counters["duplicates"] - server_base["duplicates"]
    summary.decode_failures = server.counters["decode_failures"] - server_base["decode_failures"]
    summary.fixes_committed = tracker.counters["fixes_committed"] - tracker_base["fixes_committed"]
    summary.sightings_committed = (
        tracker.counters["sightings_committed"] - tracker_base["sightings_committed"]
    )
    summary.unbound = tracker.counters["unbound"] - tracker_base["unbound"]
    summary.stale = tracker.counters["stale"] - tracker_base["stale"]
    summary.degenerate_sightings = (
        tracker.counters["degenerate_sightings"] - tracker_base["degenerate_sightings"]
    )
    if verify and (stop_event is None or not stop_event.is_set()):
        summary.verify_conservation()
    return summary
