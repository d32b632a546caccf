"""Service configuration and camera-definition files.

Both use the same line-based structured text as everything else in this
package: full-line comments with '#', `key=value` pairs, `[section]`
headers where sections apply. Relative paths inside a config file resolve
against the file's own directory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import DegenerateGeometryError, ScenarioError, ValidationError
from ..fiducial.camera import CameraIntrinsics, Pose, camera_pose_from_angles
from ..fiducial.dlt import CalibrationPoint, dlt_calibrate, pose_from_projection
from ..geodesy import EnuPoint, GeoPoint
from ..tracker import CameraRig


@dataclass
class Line:
    lineno: int
    key: str
    value: str


@dataclass
class Section:
    name: str
    lineno: int
    lines: list[Line] = field(default_factory=list)

    def first(self, key: str) -> Optional[str]:
        for ln in self.lines:
            if ln.key == key:
                return ln.value
        return None

    def all(self, key: str) -> list[Line]:
        return [ln for ln in self.lines if ln.key == key]


def parse_structured(text: str, path: str = "<text>") -> tuple[Section, list[Section]]:
    """Split structured text into a header pseudo-section and named sections."""
    header = Section("", 0)
    sections: list[Section] = []
    current = header
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = Section(line[1:-1].strip(), lineno)
            sections.append(current)
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ScenarioError(f"{path}:{lineno}: expected key=value or [section], got {line!r}")
        current.lines.append(Line(lineno, key.strip(), value.strip()))
    return header, sections


def parse_geo(value: str) -> GeoPoint:
    parts = value.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected lat,lon,alt: {value!r}")
    return GeoPoint(float(parts[0]), float(parts[1]), float(parts[2]))


def parse_enu(value: str) -> EnuPoint:
    parts = value.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected east,north,up: {value!r}")
    return EnuPoint(float(parts[0]), float(parts[1]), float(parts[2]))


@dataclass
class ServiceConfig:
    origin: GeoPoint
    gateway_listen: tuple[str, int] = ("127.0.0.1", 0)
    api_listen: tuple[str, int] = ("127.0.0.1", 0)
    bindings_path: Optional[Path] = None
    cameras_path: Optional[Path] = None
    log_path: Path = Path("track.log")
    scenario_path: Optional[Path] = None
    speed: float = math.inf
    heartbeat_s: float = 15.0


def _parse_listen(value: str) -> tuple[str, int]:
    host, sep, port = value.rpartition(":")
    if not sep:
        raise ValueError(f"expected host:port, got {value!r}")
    return host, int(port)


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read config {path}: {exc}") from exc
    header, sections = parse_structured(text, str(path))
    if sections:
        raise ScenarioError(f"{path}:{sections[0].lineno}: config files have no sections")
    base = path.parent
    values = {ln.key: (ln.value, ln.lineno) for ln in header.lines}

    def take(key: str) -> Optional[str]:
        return values.pop(key, (None, 0))[0]

    origin_raw = take("origin")
    if origin_raw is None:
        raise ScenarioError(f"{path}: missing required key 'origin'")
    try:
        cfg = ServiceConfig(origin=parse_geo(origin_raw))
        if (v := take("gateway_listen")) is not None:
            cfg.gateway_listen = _parse_listen(v)
        if (v := take("api_listen")) is not None:
            cfg.api_listen = _parse_listen(v)
        if (v := take("bindings")) is not None:
            cfg.bindings_path = base / v
        if (v := take("cameras")) is not None:
            cfg.cameras_path = base / v
        if (v := take("log")) is not None:
            cfg.log_path = base / v
        if (v := take("scenario")) is not None:
            cfg.scenario_path = base / v
        if (v := take("speed")) is not None:
            cfg.speed = float(v)
        if (v := take("heartbeat_s")) is not None:
            cfg.heartbeat_s = float(v)
    except (ValueError, ValidationError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    if values:
        key, (_, lineno) = next(iter(values.items()))
        raise ScenarioError(f"{path}:{lineno}: unknown config key {key!r}")
    return cfg


def _intrinsics_from_section(sec: Section, path: str) -> CameraIntrinsics:
    res = sec.first("resolution")
    if res is None:
        raise ScenarioError(f"{path}:{sec.lineno}: camera needs resolution=WxH")
    try:
        w, h = (int(x) for x in res.lower().split("x"))
    except ValueError as exc:
        raise ScenarioError(f"{path}:{sec.lineno}: bad resolution {res!r}") from exc
    hfov_rad = sec.first("hfov_rad")
    hfov_deg = sec.first("hfov_deg")
    focal_px = sec.first("focal_px")
    try:
        if hfov_rad is not None:
            return CameraIntrinsics(w, h, float(hfov_rad))
        if hfov_deg is not None:
            return CameraIntrinsics(w, h, math.radians(float(hfov_deg)))
        if focal_px is not None:
            return CameraIntrinsics.from_focal(w, h, float(focal_px))
    except (ValueError, ValidationError) as exc:
        raise ScenarioError(f"{path}:{sec.lineno}: {exc}") from exc
    raise ScenarioError(f"{path}:{sec.lineno}: camera needs hfov_rad, hfov_deg or focal_px")


def _pose_from_section(sec: Section, intrinsics: CameraIntrinsics, path: str) -> Pose:
    calpoints = sec.all("calpoint")
    if calpoints:
        points = []
        for ln in calpoints:
            world_raw, sep, px_raw = ln.value.partition("->")
            if not sep:
                raise ScenarioError(f"{path}:{ln.lineno}: calpoint needs 'e,n,u->u_px,v_px'")
            try:
                world = parse_enu(world_raw.strip())
                u, v = (float(x) for x in px_raw.strip().split(","))
            except (ValueError, ValidationError) as exc:
                raise ScenarioError(f"{path}:{ln.lineno}: {exc}") from exc
            points.append(CalibrationPoint(world, (u, v)))
        try:
            P, _rms = dlt_calibrate(points)
            return pose_from_projection(P, intrinsics)
        except (ValidationError, DegenerateGeometryError) as exc:
            raise ScenarioError(f"{path}:{sec.lineno}: calibration failed: {exc}") from exc
    position = sec.first("position")
    if position is None:
        raise ScenarioError(f"{path}:{sec.lineno}: camera needs position= or calpoint= lines")
    try:
        return camera_pose_from_angles(
            parse_enu(position),
            float(sec.first("yaw_deg") or 0.0),
            float(sec.first("pitch_deg") or 0.0),
            float(sec.first("roll_deg") or 0.0),
        )
    except (ValueError, ValidationError) as exc:
        raise ScenarioError(f"{path}:{sec.lineno}: {exc}") from exc


def load_camera_rigs(path: str | Path) -> list[CameraRig]:
    """Parse a camera definitions file into deployable rigs."""
    path = Path(path)
    header, sections = parse_structured(path.read_text(), str(path))
    if header.lines:
        raise ScenarioError(f"{path}:{header.lines[0].lineno}: camera files start with a [camera] section")
    rigs = []
    for sec in sections:
        if sec.name != "camera":
            raise ScenarioError(f"{path}:{sec.lineno}: unknown section [{sec.name}]")
        camera_id = sec.first("camera_id")
        if not camera_id:
            raise ScenarioError(f"{path}:{sec.lineno}: camera needs camera_id")
        intrinsics = _intrinsics_from_section(sec, str(path))
        pose = _pose_from_section(sec, intrinsics, str(path))
        rigs.append(CameraRig(camera_id, intrinsics, pose))
    return rigs
