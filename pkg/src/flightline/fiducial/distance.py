"""Maximum tag detection distance from camera optics and tag geometry.

    distance = t / (2 * tan(b * f * p / (2 * r)))

where t is the tag side in metres, b the number of bit cells spanning the tag
width (border included), f the horizontal field of view in radians, p the
pixels a detector needs per bit, and r the horizontal resolution in pixels.
The result is exactly linear in t and strictly decreasing in b and p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ValidationError

DEFAULT_BITS_PER_WIDTH = 10
DEFAULT_PIXELS_PER_BIT = 5.0


@dataclass(frozen=True)
class DistanceQuery:
    """One evaluation of the detection-distance formula."""

    t: float  # tag size, metres
    b: int = DEFAULT_BITS_PER_WIDTH  # bit cells across the tag width
    f: float = math.radians(70.0)  # horizontal FOV, radians
    p: float = DEFAULT_PIXELS_PER_BIT  # pixels required per bit
    r: int = 3840  # horizontal resolution, pixels

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValidationError(f"tag size t must be >= 0: {self.t}")
        for name, v in (("b", self.b), ("f", self.f), ("p", self.p), ("r", self.r)):
            if v <= 0:
                raise ValidationError(f"{name} must be positive: {v}")
        if self.angle_rad >= math.pi / 2:
            raise ValidationError(
                f"b*f*p/(2r) = {self.angle_rad:.4f} rad reaches pi/2; no finite distance exists"
            )

    @property
    def angle_rad(self) -> float:
        """Angle subtended by one bit cell times the pixels-per-bit requirement."""
        return self.b * self.f * self.p / (2.0 * self.r)


def max_detection_distance(q: DistanceQuery) -> float:
    """Greatest range in metres at which the query's tag remains decodable."""
    return q.t / (2.0 * math.tan(q.angle_rad))
