import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flightline.errors import ValidationError
from flightline.geodesy import (
    EARTH_RADIUS_M,
    EnuPoint,
    FrameOrigin,
    GeoPoint,
    enu_to_geo,
    geo_to_enu,
    ground_distance,
)

ORIGIN = FrameOrigin(GeoPoint(39.0, -74.35, 0.0))

# hand oracle: 1e-4 deg of arc = 1e-4 * pi/180 * 6371000 m
ARC_1E4_DEG_M = 11.119492664455874


def test_identity_at_origin():
    p = geo_to_enu(GeoPoint(39.0, -74.35, 0.0), ORIGIN)
    assert p == EnuPoint(0.0, 0.0, 0.0)


def test_north_step_hand_value():
    p = geo_to_enu(GeoPoint(39.0 + 1e-4, -74.35, 0.0), ORIGIN)
    assert p.east_m == 0.0
    assert p.north_m == pytest.approx(ARC_1E4_DEG_M, abs=1e-6)


def test_east_step_at_equator():
    origin = FrameOrigin(GeoPoint(0.0, 0.0, 0.0))
    p = geo_to_enu(GeoPoint(0.0, 1e-4, 0.0), origin)
    assert p.north_m == 0.0
    assert p.east_m == pytest.approx(ARC_1E4_DEG_M, abs=1e-6)  # cos 0 = 1


def test_altitude_passthrough():
    p = geo_to_enu(GeoPoint(39.0, -74.35, 25.5), FrameOrigin(GeoPoint(39.0, -74.35, 10.0)))
    assert p.up_m == pytest.approx(15.5)


def test_enu_to_geo_inverse_of_hand_value():
    g = enu_to_geo(EnuPoint(0.0, ARC_1E4_DEG_M, 0.0), ORIGIN)
    assert g.lat_deg == pytest.approx(39.0 + 1e-4, abs=1e-12)


def test_round_trip_identity():
    for east, north, up in [(0, 0, 0), (4000, -2500, 12.5), (-9000, 9000, -3.0)]:
        p = enu_to_geo(EnuPoint(east, north, up), ORIGIN)
        back = geo_to_enu(p, ORIGIN)
        assert back.east_m == pytest.approx(east, abs=1e-6)
        assert back.north_m == pytest.approx(north, abs=1e-6)


@given(
    lat=st.floats(38.95, 39.05),
    lon=st.floats(-74.40, -74.30),
    alt=st.floats(-100, 100),
)
@settings(max_examples=200)
def test_round_trip_within_1e9_degrees(lat, lon, alt):
    p = GeoPoint(lat, lon, alt)
    back = enu_to_geo(geo_to_enu(p, ORIGIN), ORIGIN)
    assert abs(back.lat_deg - p.lat_deg) < 1e-9
    assert abs(back.lon_deg - p.lon_deg) < 1e-9


def test_linearity_in_deltas():
    # deltas chosen as powers of two so the inputs carry no representation error
    origin = FrameOrigin(GeoPoint(39.0, -74.25, 0.0))
    d = 2.0 ** -20
    a = geo_to_enu(GeoPoint(39.0 + 2 * d, -74.25 + 6 * d, 0.0), origin)
    b = geo_to_enu(GeoPoint(39.0 + d, -74.25 + 3 * d, 0.0), origin)
    assert a.north_m == pytest.approx(2 * b.north_m, rel=1e-12)
    assert a.east_m == pytest.approx(2 * b.east_m, rel=1e-12)


def test_ground_distance_zero_iff_same_point():
    a = GeoPoint(39.0, -74.35, 0.0)
    assert ground_distance(a, a) == 0.0
    assert ground_distance(a, GeoPoint(39.0, -74.3501, 0.0)) > 0.0


def test_ground_distance_antipodal():
    # hand haversine: half circumference = pi * R
    d = ground_distance(GeoPoint(0.0, 0.0, 0.0), GeoPoint(0.0, 180.0, 0.0))
    assert d == pytest.approx(math.pi * EARTH_RADIUS_M, rel=1e-12)


def test_ground_distance_symmetry():
    a = GeoPoint(39.0, -74.35, 0.0)
    b = GeoPoint(38.5, -75.0, 0.0)
    assert ground_distance(a, b) == ground_distance(b, a)


@given(
    data=st.tuples(
        st.floats(-60, 60), st.floats(-179, 179),
        st.floats(-60, 60), st.floats(-179, 179),
        st.floats(-60, 60), st.floats(-179, 179),
    )
)
@settings(max_examples=300)
def test_triangle_inequality(data):
    la1, lo1, la2, lo2, la3, lo3 = data
    a, b, c = GeoPoint(la1, lo1, 0), GeoPoint(la2, lo2, 0), GeoPoint(la3, lo3, 0)
    assert ground_distance(a, c) <= ground_distance(a, b) + ground_distance(b, c) + 1e-6


@pytest.mark.parametrize("lat,lon", [(91.0, 0.0), (-90.1, 0.0), (0.0, 180.5), (0.0, -181.0)])
def test_out_of_range_rejected(lat, lon):
    with pytest.raises(ValidationError):
        GeoPoint(lat, lon, 0.0)


def test_non_finite_rejected():
    with pytest.raises(ValidationError):
        GeoPoint(float("nan"), 0.0, 0.0)
    with pytest.raises(ValidationError):
        EnuPoint(float("inf"), 0.0, 0.0)
