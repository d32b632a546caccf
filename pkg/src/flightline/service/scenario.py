"""Simulation scenario files: scripted devices, gateways, and tagged aircraft.

Validation collects every problem it finds and raises one ScenarioError whose
message lists them with line numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import ScenarioError, ValidationError
from ..geodesy import GeoPoint
from ..lorawan.airtime import RadioParams
from ..lorawan.network import GatewayConfig
from .config import Section, parse_geo, parse_structured

DEFAULT_START_TIME_MS = 1_700_000_000_000  # fixed epoch: simulated logs never read the wall clock
DEFAULT_FIX_INTERVAL_S = 10.0
DEFAULT_FRAME_INTERVAL_S = 1.0


@dataclass(frozen=True)
class Waypoint:
    position: GeoPoint
    t_offset_s: float


@dataclass
class DeviceScript:
    dev_addr: int
    start: GeoPoint
    waypoints: list[Waypoint] = field(default_factory=list)
    fix_interval_s: float = DEFAULT_FIX_INTERVAL_S
    battery_pct: int = 100
    port: int = 1

    def position_at(self, t_s: float) -> GeoPoint:
        return _position_at(self.start, self.waypoints, t_s)


@dataclass
class AircraftScript:
    tag_id: int
    tag_size_m: float
    start: GeoPoint
    waypoints: list[Waypoint] = field(default_factory=list)

    def position_at(self, t_s: float) -> GeoPoint:
        return _position_at(self.start, self.waypoints, t_s)


def _position_at(start: GeoPoint, waypoints: list[Waypoint], t_s: float) -> GeoPoint:
    prev_pos, prev_t = start, 0.0
    for wp in waypoints:
        if t_s <= wp.t_offset_s:
            span = wp.t_offset_s - prev_t
            if span <= 0:
                return wp.position
            a = (t_s - prev_t) / span
            return GeoPoint(
                prev_pos.lat_deg + a * (wp.position.lat_deg - prev_pos.lat_deg),
                prev_pos.lon_deg + a * (wp.position.lon_deg - prev_pos.lon_deg),
                prev_pos.alt_m + a * (wp.position.alt_m - prev_pos.alt_m),
            )
        prev_pos, prev_t = wp.position, wp.t_offset_s
    return prev_pos


@dataclass
class Scenario:
    start_time_ms: int = DEFAULT_START_TIME_MS
    duration_s: float = 60.0
    frame_interval_s: float = DEFAULT_FRAME_INTERVAL_S
    radio: RadioParams = field(default_factory=RadioParams)
    devices: list[DeviceScript] = field(default_factory=list)
    gateways: list[GatewayConfig] = field(default_factory=list)
    aircraft: list[AircraftScript] = field(default_factory=list)


class _Collector:
    def __init__(self, path: str):
        self.path = path
        self.errors: list[str] = []

    def add(self, lineno: int, message: str) -> None:
        self.errors.append(f"{self.path}:{lineno}: {message}")

    def raise_if_any(self) -> None:
        if self.errors:
            raise ScenarioError("scenario validation failed:\n" + "\n".join(self.errors))


def _parse_waypoint(value: str) -> Waypoint:
    pos_raw, sep, t_raw = value.partition("@")
    if not sep:
        raise ValueError(f"waypoint needs 'lat,lon,alt@t_offset_s': {value!r}")
    return Waypoint(parse_geo(pos_raw.strip()), float(t_raw.strip()))


_SECTION_KEYS = {
    "device": {"dev_addr", "start", "waypoint", "fix_interval_s", "battery_pct", "port"},
    "gateway": {"gateway_id", "position", "range_m", "loss_prob", "rng_seed"},
    "aircraft": {"tag_id", "tag_size_m", "start", "waypoint"},
    "radio": {
        "spreading_factor", "bandwidth_hz", "coding_rate_index",
        "preamble_symbols", "explicit_header", "crc_on",
    },
}


def _check_keys(sec: Section, errors: _Collector) -> None:
    allowed = _SECTION_KEYS[sec.name]
    for ln in sec.lines:
        if ln.key not in allowed:
            errors.add(ln.lineno, f"unknown key {ln.key!r} in [{sec.name}]")


def _device_from(sec: Section, errors: _Collector, default_fix_interval: float) -> Optional[DeviceScript]:
    dev_raw = sec.first("dev_addr")
    start_raw = sec.first("start")
    if dev_raw is None or start_raw is None:
        errors.add(sec.lineno, "[device] needs dev_addr and start")
        return None
    try:
        dev = DeviceScript(
            dev_addr=int(dev_raw, 0),
            start=parse_geo(start_raw),
            fix_interval_s=float(sec.first("fix_interval_s") or default_fix_interval),
            battery_pct=int(sec.first("battery_pct") or 100),
            port=int(sec.first("port") or 1),
        )
        for ln in sec.all("waypoint"):
            dev.waypoints.append(_parse_waypoint(ln.value))
    except (ValueError, ValidationError) as exc:
        errors.add(sec.lineno, str(exc))
        return None
    if dev.fix_interval_s <= 0:
        errors.add(sec.lineno, f"fix_interval_s must be positive: {dev.fix_interval_s}")
        return None
    dev.waypoints.sort(key=lambda w: w.t_offset_s)
    return dev


def _gateway_from(sec: Section, errors: _Collector) -> Optional[GatewayConfig]:
    try:
        return GatewayConfig(
            gateway_id=int(sec.first("gateway_id") or "", 0),
            position=parse_geo(sec.first("position") or ""),
            range_m=float(sec.first("range_m") or 5000.0),
            loss_prob=float(sec.first("loss_prob") or 0.0),
            rng_seed=int(sec.first("rng_seed") or 0, 0),
        )
    except (ValueError, ValidationError) as exc:
        errors.add(sec.lineno, f"[gateway]: {exc}")
        return None


def _aircraft_from(sec: Section, errors: _Collector) -> Optional[AircraftScript]:
    try:
        ac = AircraftScript(
            tag_id=int(sec.first("tag_id") or "", 0),
            tag_size_m=float(sec.first("tag_size_m") or 0.5),
            start=parse_geo(sec.first("start") or ""),
        )
        for ln in sec.all("waypoint"):
            ac.waypoints.append(_parse_waypoint(ln.value))
    except (ValueError, ValidationError) as exc:
        errors.add(sec.lineno, f"[aircraft]: {exc}")
        return None
    ac.waypoints.sort(key=lambda w: w.t_offset_s)
    return ac


def _radio_from(sec: Section, errors: _Collector) -> RadioParams:
    try:
        return RadioParams(
            spreading_factor=int(sec.first("spreading_factor") or 7),
            bandwidth_hz=int(sec.first("bandwidth_hz") or 125_000),
            coding_rate_index=int(sec.first("coding_rate_index") or 1),
            preamble_symbols=int(sec.first("preamble_symbols") or 8),
            explicit_header=(sec.first("explicit_header") or "true").lower() != "false",
            crc_on=(sec.first("crc_on") or "true").lower() != "false",
        )
    except (ValueError, ValidationError) as exc:
        errors.add(sec.lineno, f"[radio]: {exc}")
        return RadioParams()


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    errors = _Collector(path)
    try:
        header, sections = parse_structured(text, path)
    except ScenarioError:
        raise
    scenario = Scenario()
    default_fix_interval = DEFAULT_FIX_INTERVAL_S
    for ln in header.lines:
        try:
            if ln.key == "start_time_ms":
                scenario.start_time_ms = int(ln.value)
            elif ln.key == "duration_s":
                scenario.duration_s = float(ln.value)
            elif ln.key == "fix_interval_s":
                default_fix_interval = float(ln.value)
            elif ln.key == "frame_interval_s":
                scenario.frame_interval_s = float(ln.value)
            else:
                errors.add(ln.lineno, f"unknown scenario key {ln.key!r}")
        except ValueError as exc:
            errors.add(ln.lineno, str(exc))
    for sec in sections:
        if sec.name not in _SECTION_KEYS:
            errors.add(sec.lineno, f"unknown section [{sec.name}]")
            continue
        _check_keys(sec, errors)
        if sec.name == "radio":
            scenario.radio = _radio_from(sec, errors)
        elif sec.name == "device":
            dev = _device_from(sec, errors, default_fix_interval)
            if dev is not None:
                scenario.devices.append(dev)
        elif sec.name == "gateway":
            gw = _gateway_from(sec, errors)
            if gw is not None:
                scenario.gateways.append(gw)
        elif sec.name == "aircraft":
            ac = _aircraft_from(sec, errors)
            if ac is not None:
                scenario.aircraft.append(ac)
    if scenario.duration_s <= 0:
        errors.add(0, f"duration_s must be positive: {scenario.duration_s}")
    seen_devs: set[int] = set()
    for dev in scenario.devices:
        if dev.dev_addr in seen_devs:
            errors.add(0, f"duplicate dev_addr {dev.dev_addr:#x}")
        seen_devs.add(dev.dev_addr)
    errors.raise_if_any()
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(text, str(path))
