import math

import numpy as np
import pytest

from flightline.errors import ValidationError
from flightline.fiducial.distance import DistanceQuery, max_detection_distance

# hand evaluation of t / (2 tan(b f p / 2r)) at t=0.5, b=10, f=1.2217, p=5, r=3840:
# angle = 61.085/7680 = 0.0079537760416667 rad, tan = 0.0079539437, d = 31.430949 m
HAND_VALUE_M = 31.43094887116502


def test_reference_query_hand_value():
    q = DistanceQuery(t=0.5, b=10, f=1.2217, p=5, r=3840)
    assert max_detection_distance(q) == pytest.approx(HAND_VALUE_M, rel=1e-12)
    assert max_detection_distance(q) == pytest.approx(31.43, abs=0.01)


def test_zero_tag_size_gives_zero():
    assert max_detection_distance(DistanceQuery(t=0.0, b=10, f=1.2217, p=5, r=3840)) == 0.0


def test_doubling_t_exactly_doubles():
    rng = np.random.default_rng(42)
    for _ in range(100):
        t = float(rng.uniform(0.05, 3.0))
        b = int(rng.integers(4, 16))
        f = float(rng.uniform(0.3, 1.6))
        p = float(rng.uniform(2.0, 10.0))
        r = int(rng.integers(640, 7680))
        base = max_detection_distance(DistanceQuery(t, b, f, p, r))
        doubled = max_detection_distance(DistanceQuery(2.0 * t, b, f, p, r))
        assert doubled == 2.0 * base  # bit-exact: t only scales the numerator


def test_strictly_decreasing_in_p_and_b():
    base = DistanceQuery(t=0.5, b=10, f=1.2217, p=5, r=3840)
    d0 = max_detection_distance(base)
    assert max_detection_distance(DistanceQuery(0.5, 10, 1.2217, 6, 3840)) < d0
    assert max_detection_distance(DistanceQuery(0.5, 11, 1.2217, 5, 3840)) < d0
    ds = [
        max_detection_distance(DistanceQuery(0.5, b, 1.2217, 5, 3840))
        for b in range(4, 20)
    ]
    assert all(a > b for a, b in zip(ds, ds[1:]))


def test_increasing_in_resolution():
    low = max_detection_distance(DistanceQuery(0.5, 10, 1.2217, 5, 1920))
    high = max_detection_distance(DistanceQuery(0.5, 10, 1.2217, 5, 3840))
    assert high > low


def test_domain_error_when_angle_reaches_half_pi():
    # b*f*p/(2r) >= pi/2 has no finite distance
    with pytest.raises(ValidationError):
        DistanceQuery(t=0.5, b=1000, f=math.pi / 2, p=100, r=10)


def test_negative_or_zero_parameters_rejected():
    with pytest.raises(ValidationError):
        DistanceQuery(t=-0.1, b=10, f=1.0, p=5, r=3840)
    with pytest.raises(ValidationError):
        DistanceQuery(t=0.5, b=0, f=1.0, p=5, r=3840)
    with pytest.raises(ValidationError):
        DistanceQuery(t=0.5, b=10, f=-1.0, p=5, r=3840)
