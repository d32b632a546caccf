"""Fusion of GPS fixes and fiducial sightings into one asset registry.

No filtering or smoothing happens here: fusion means routing each source to
the bound asset and unifying frames, so the map shows exactly what was
reported. The commit path is single-writer (a lock serializes ingest);
``snapshot`` copies under the same lock and therefore always sees a
consistent prefix of the commit order.

A point is committed only after the persistence sink accepted it, so every
committed TrackPoint reaches the trajectory log exactly once.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

from .errors import (
    BindingConflictError,
    CameraNotCalibratedError,
    DegenerateGeometryError,
    ValidationError,
)
from .fiducial.camera import CameraIntrinsics, Pose, TagDetection, tag_world_position
from .fiducial.homography import homography_from_corners, pose_from_homography, reprojection_rms_px
from .geodesy import FrameOrigin, GeoPoint, enu_to_geo
from .lorawan.network import NewFix

_ID_RE = re.compile(r"^[A-Za-z0-9_.:-]+$")


class AssetKind(str, Enum):
    PERSON = "person"
    SUPPORT_EQUIPMENT = "support_equipment"
    AIRCRAFT = "aircraft"


class Source(str, Enum):
    GPS_LORA = "gps_lora"
    FIDUCIAL = "fiducial"


@dataclass(frozen=True)
class AssetId:
    kind: AssetKind
    id: str

    def __post_init__(self) -> None:
        if not _ID_RE.match(self.id):
            raise ValidationError(f"asset id must match {_ID_RE.pattern}: {self.id!r}")


@dataclass(frozen=True)
class TrackPoint:
    asset: AssetId
    position: GeoPoint
    source: Source
    timestamp_ms: int
    quality: Optional[float] = None


class BindingTable:
    """dev_addr -> asset and tag_id -> asset maps; each key binds at most once."""

    def __init__(self) -> None:
        self._by_dev: dict[int, AssetId] = {}
        self._by_tag: dict[int, AssetId] = {}

    def bind_device(self, dev_addr: int, asset: AssetId, force: bool = False) -> None:
        existing = self._by_dev.get(dev_addr)
        if existing is not None and existing != asset and not force:
            raise BindingConflictError(f"dev_addr {dev_addr:#x} already bound to {existing}")
        self._by_dev[dev_addr] = asset

    def bind_tag(self, tag_id: int, asset: AssetId, force: bool = False) -> None:
        existing = self._by_tag.get(tag_id)
        if existing is not None and existing != asset and not force:
            raise BindingConflictError(f"tag_id {tag_id} already bound to {existing}")
        self._by_tag[tag_id] = asset

    def asset_for_device(self, dev_addr: int) -> Optional[AssetId]:
        return self._by_dev.get(dev_addr)

    def asset_for_tag(self, tag_id: int) -> Optional[AssetId]:
        return self._by_tag.get(tag_id)

    def all_assets(self) -> set[AssetId]:
        return set(self._by_dev.values()) | set(self._by_tag.values())

    def __len__(self) -> int:
        return len(self._by_dev) + len(self._by_tag)


def load_bindings(path: str | Path) -> BindingTable:
    """Parse the binding table file: one `dev=.. kind=.. id=..` or `tag=..` line each."""
    table = BindingTable()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields: dict[str, str] = {}
        for tok in line.split():
            if "=" not in tok:
                raise ValidationError(f"{path}:{lineno}: malformed token {tok!r}")
            k, v = tok.split("=", 1)
            fields[k] = v
        try:
            asset = AssetId(AssetKind(fields["kind"]), fields["id"])
            if "dev" in fields:
                table.bind_device(int(fields["dev"], 0), asset)
            elif "tag" in fields:
                table.bind_tag(int(fields["tag"], 0), asset)
            else:
                raise KeyError("dev or tag")
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    return table


@dataclass(frozen=True)
class CameraRig:
    """A deployed camera: intrinsics plus calibrated world extrinsics."""

    camera_id: str
    intrinsics: CameraIntrinsics
    pose: Pose


class Tracker:
    """Single-writer registry of the latest committed state per asset."""

    def __init__(
        self,
        origin: FrameOrigin,
        bindings: BindingTable,
        sink: Optional[Callable[[TrackPoint], None]] = None,
    ):
        self.origin = origin
        self.bindings = bindings
        self._sink = sink
        # reentrant so commit observers may call snapshot()
        self._lock = threading.RLock()
        self._latest: dict[AssetId, TrackPoint] = {}
        self._cameras: dict[str, CameraRig] = {}
        self._observers: list[Callable[[TrackPoint], None]] = []
        self.counters = {
            "fixes_committed": 0,
            "sightings_committed": 0,
            "unbound": 0,
            "stale": 0,
            "degenerate_sightings": 0,
        }

    def register_camera(self, rig: CameraRig) -> None:
        self._cameras[rig.camera_id] = rig

    def add_observer(self, fn: Callable[[TrackPoint], None]) -> None:
        """Called after each successful commit, in commit order, under the commit lock."""
        self._observers.append(fn)

    def _commit(self, point: TrackPoint, counter: str) -> Optional[TrackPoint]:
        last = self._latest.get(point.asset)
        if last is not None and point.timestamp_ms <= last.timestamp_ms:
            self.counters["stale"] += 1
            return None
        if self._sink is not None:
            self._sink(point)  # persistence failure aborts the commit
        self._latest[point.asset] = point
        self.counters[counter] += 1
        for fn in self._observers:
            fn(point)
        return point

    def ingest_gps(self, new_fix: NewFix) -> Optional[TrackPoint]:
        """Commit a deduplicated GPS fix; None when unbound or stale."""
        with self._lock:
            asset = self.bindings.asset_for_device(new_fix.dev_addr)
            if asset is None:
                self.counters["unbound"] += 1
                return None
            fix = new_fix.fix
            point = TrackPoint(
                asset=asset,
                position=GeoPoint(fix.lat_deg, fix.lon_deg, fix.alt_m),
                source=Source.GPS_LORA,
                timestamp_ms=new_fix.rx_unix_ms,
                quality=float(fix.battery_pct),
            )
            return self._commit(point, "fixes_committed")

    def ingest_sighting(
        self, detection: TagDetection, camera_id: str, timestamp_ms: int
    ) -> Optional[TrackPoint]:
        """Localize a tag sighting through the camera chain and commit it."""
        rig = self._cameras.get(camera_id)
        if rig is None:
            raise CameraNotCalibratedError(f"camera {camera_id!r} has no calibrated extrinsics")
        with self._lock:
            asset = self.bindings.asset_for_tag(detection.tag_id)
            if asset is None:
                self.counters["unbound"] += 1
                return None
            try:
                H = homography_from_corners(detection)
                tag_in_camera = pose_from_homography(H, rig.intrinsics)
                rms = reprojection_rms_px(detection, rig.intrinsics, tag_in_camera)
            except DegenerateGeometryError:
                self.counters["degenerate_sightings"] += 1
                return None
            enu = tag_world_position(rig.pose, tag_in_camera)
            point = TrackPoint(
                asset=asset,
                position=enu_to_geo(enu, self.origin),
                source=Source.FIDUCIAL,
                timestamp_ms=timestamp_ms,
                quality=rms,
            )
            return self._commit(point, "sightings_committed")

    def apply_track_point(self, point: TrackPoint) -> Optional[TrackPoint]:
        """Replay path: commit an already-resolved point under the same stale rule."""
        with self._lock:
            counter = "fixes_committed" if point.source is Source.GPS_LORA else "sightings_committed"
            return self._commit(point, counter)

    def snapshot(self) -> list[TrackPoint]:
        """Latest committed point per asset, ordered by asset id."""
        with self._lock:
            points = list(self._latest.values())
        return sorted(points, key=lambda p: (p.asset.id, p.asset.kind.value))
