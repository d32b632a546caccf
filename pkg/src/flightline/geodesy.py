"""WGS84 <-> local East-North-Up conversions on a spherical earth.

A flightline spans a few kilometres at most, so a local tangent plane with
a spherical earth (R = 6,371,000 m) keeps every conversion hand-checkable:

    east  = (lon - lon0) * cos(lat0) * R
    north = (lat - lat0) * R
    up    = alt - alt0

Error against a true ellipsoid is below 0.1% inside 10 km of the origin,
well under map-marker scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 position: latitude/longitude in degrees, altitude in metres."""

    lat_deg: float
    lon_deg: float
    alt_m: float = 0.0

    def __post_init__(self) -> None:
        for name, v in (("lat_deg", self.lat_deg), ("lon_deg", self.lon_deg), ("alt_m", self.alt_m)):
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValidationError(f"lat_deg out of range [-90, 90]: {self.lat_deg}")
        if not -180.0 <= self.lon_deg <= 180.0:
            raise ValidationError(f"lon_deg out of range [-180, 180]: {self.lon_deg}")


@dataclass(frozen=True)
class EnuPoint:
    """Metres east/north/up of a declared frame origin."""

    east_m: float
    north_m: float
    up_m: float = 0.0

    def __post_init__(self) -> None:
        for name, v in (("east_m", self.east_m), ("north_m", self.north_m), ("up_m", self.up_m)):
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class FrameOrigin:
    """GeoPoint anchoring the local ENU frame. Immutable once the tracker starts."""

    origin: GeoPoint


def geo_to_enu(p: GeoPoint, origin: FrameOrigin) -> EnuPoint:
    """Project a geographic point into the origin's local tangent plane."""
    o = origin.origin
    lat0 = math.radians(o.lat_deg)
    east = math.radians(p.lon_deg - o.lon_deg) * math.cos(lat0) * EARTH_RADIUS_M
    north = math.radians(p.lat_deg - o.lat_deg) * EARTH_RADIUS_M
    return EnuPoint(east, north, p.alt_m - o.alt_m)


def enu_to_geo(p: EnuPoint, origin: FrameOrigin) -> GeoPoint:
    """Inverse of :func:`geo_to_enu`; round-trip error < 1e-9 degrees near the origin."""
    o = origin.origin
    lat0 = math.radians(o.lat_deg)
    lat = o.lat_deg + math.degrees(p.north_m / EARTH_RADIUS_M)
    lon = o.lon_deg + math.degrees(p.east_m / (EARTH_RADIUS_M * math.cos(lat0)))
    return GeoPoint(lat, lon, p.up_m + o.alt_m)


def ground_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle (haversine) distance in metres, ignoring altitude."""
    lat1, lat2 = math.radians(a.lat_deg), math.radians(b.lat_deg)
    dlat = lat2 - lat1
    dlon = math.radians(b.lon_deg - a.lon_deg)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))
