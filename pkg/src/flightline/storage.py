"""Append-only trajectory log and deterministic time-scaled replay.

Record grammar (one record per line, LF-terminated, single space separators,
fields self-describing and in fixed order):

    ts=<unix ms int> kind=<person|support_equipment|aircraft> id=<token>
    lat=<deg, 7 fractional digits> lon=<deg, 7 fractional digits>
    alt=<m, 1 fractional digit> source=<gps_lora|fiducial>
    quality=<3 fractional digits, or empty>

The fixed fractional widths make serialize -> parse -> serialize byte-stable,
which the replay-equivalence checks rely on. Every append is flushed, so a
crash can lose at most the final partial line; the reader skips (and counts)
any line that does not parse, which covers truncation mid-record.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import ValidationError
from .geodesy import GeoPoint
from .tracker import AssetId, AssetKind, Source, TrackPoint

_FIELDS = ("ts", "kind", "id", "lat", "lon", "alt", "source", "quality")


def format_track_point(p: TrackPoint) -> str:
    quality = "" if p.quality is None else f"{p.quality:.3f}"
    return (
        f"ts={p.timestamp_ms} kind={p.asset.kind.value} id={p.asset.id} "
        f"lat={p.position.lat_deg:.7f} lon={p.position.lon_deg:.7f} "
        f"alt={p.position.alt_m:.1f} source={p.source.value} quality={quality}"
    )


def parse_track_point(line: str) -> TrackPoint:
    """Parse one record line; raises ValidationError on any grammar violation."""
    tokens = line.strip().split(" ")
    if len(tokens) != len(_FIELDS):
        raise ValidationError(f"expected {len(_FIELDS)} fields, got {len(tokens)}")
    values: dict[str, str] = {}
    for expected, tok in zip(_FIELDS, tokens):
        key, sep, value = tok.partition("=")
        if not sep or key != expected:
            raise ValidationError(f"expected field {expected!r}, got token {tok!r}")
        values[key] = value
    try:
        quality = None if values["quality"] == "" else float(values["quality"])
        return TrackPoint(
            asset=AssetId(AssetKind(values["kind"]), values["id"]),
            position=GeoPoint(float(values["lat"]), float(values["lon"]), float(values["alt"])),
            source=Source(values["source"]),
            timestamp_ms=int(values["ts"]),
            quality=quality,
        )
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"malformed record {line!r}: {exc}") from exc


class TrajectoryLog:
    """Single appender over a log file; readers never go through this object."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="ascii", newline="\n")

    def append(self, point: TrackPoint) -> None:
        self._fh.write(format_track_point(point) + "\n")
        self._fh.flush()

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.flush()
            self._fh.close()

    def __enter__(self) -> "TrajectoryLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_log(path: str | Path) -> tuple[list[TrackPoint], int]:
    """All parseable records in commit order, plus the count of skipped lines."""
    records: list[TrackPoint] = []
    skipped = 0
    text = Path(path).read_text(encoding="ascii", errors="replace")
    for raw in text.splitlines():
        if not raw.strip():
            continue
        try:
            records.append(parse_track_point(raw))
        except ValidationError:
            skipped += 1
    return records, skipped


def query_log(
    path: str | Path,
    asset: Optional[AssetId] = None,
    from_ts: int = 0,
    to_ts: Optional[int] = None,
) -> list[TrackPoint]:
    """Records with from_ts <= ts <= to_ts (inclusive), optionally one asset, in commit order."""
    if to_ts is not None and from_ts > to_ts:
        raise ValidationError(f"from_ts {from_ts} exceeds to_ts {to_ts}")
    records, _ = read_log(path)
    out = []
    for p in records:
        if p.timestamp_ms < from_ts:
            continue
        if to_ts is not None and p.timestamp_ms > to_ts:
            continue
        if asset is not None and p.asset != asset:
            continue
        out.append(p)
    return out


@dataclass(frozen=True)
class ReplayClock:
    """Time window and playback rate; rate = math.inf means batch emission."""

    start_ts: int
    end_ts: int
    rate: float = 1.0

    def __post_init__(self) -> None:
        if self.start_ts > self.end_ts:
            raise ValidationError(f"start_ts {self.start_ts} exceeds end_ts {self.end_ts}")
        if not self.rate > 0:
            raise ValidationError(f"rate must be positive: {self.rate}")


@dataclass(frozen=True)
class ReplaySummary:
    emitted: int
    skipped_lines: int
    wall_seconds: float


def replay(
    path: str | Path,
    clock: ReplayClock,
    sink: Callable[[TrackPoint], None],
    *,
    now_fn: Callable[[], float] = time.monotonic,
    sleep_fn: Callable[[float], None] = time.sleep,
    should_stop: Optional[Callable[[], bool]] = None,
) -> ReplaySummary:
    """Emit in-range records to the sink, paced to (ts - start_ts) / rate.

    Emission order is commit order. Deadlines are absolute against the replay
    start, so pacing does not drift with sink latency. ``should_stop`` is
    polled between records for cooperative cancellation.
    """
    records, skipped = read_log(path)
    in_range = [p for p in records if clock.start_ts <= p.timestamp_ms <= clock.end_ts]
    t0 = now_fn()
    emitted = 0
    stopped = False
    for p in in_range:
        if math.isfinite(clock.rate):
            target = t0 + (p.timestamp_ms - clock.start_ts) / 1000.0 / clock.rate
            while True:
                if should_stop is not None and should_stop():
                    stopped = True
                    break
                delay = target - now_fn()
                if delay <= 0:
                    break
                # chunked so cancellation is observed promptly mid-gap
                sleep_fn(delay if should_stop is None else min(delay, 0.25))
        elif should_stop is not None and should_stop():
            stopped = True
        if stopped:
            break
        sink(p)
        emitted += 1
    return ReplaySummary(emitted=emitted, skipped_lines=skipped, wall_seconds=now_fn() - t0)


def snapshot_lines(points: Iterable[TrackPoint]) -> str:
    """Serialize a snapshot (or any record sequence) to the log grammar."""
    return "".join(format_track_point(p) + "\n" for p in points)
