"""Pinhole camera model, rigid poses, and the synthetic tag projector.

Conventions, used everywhere in this package:

- A ``Pose`` is object-to-world: ``rotation`` maps object-frame vectors into
  the outer frame, ``translation`` is the object origin in the outer frame.
  A camera pose's outer frame is world ENU; a tag pose produced by homography
  decomposition lives in the camera frame.
- Camera frame: +x right, +y down (image rows), +z forward along the optical
  axis. Projection of camera-frame (x, y, z): pixel = (fx*x/z + cx, fy*y/z + cy).
- Tag frame: the tag is the z=0 square of side ``tag_size_m``; corners are
  ordered (-s/2,-s/2), (s/2,-s/2), (s/2,s/2), (-s/2,s/2) and every operation
  assumes that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import BehindCameraError, ValidationError
from ..geodesy import EnuPoint

MIN_DEPTH_M = 1e-9
_ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics derived from resolution and horizontal FOV."""

    resolution_h: int
    resolution_v: int
    hfov_rad: float

    def __post_init__(self) -> None:
        if self.resolution_h <= 0 or self.resolution_v <= 0:
            raise ValidationError(f"resolution must be positive: {self.resolution_h}x{self.resolution_v}")
        if not 0.0 < self.hfov_rad < math.pi:
            raise ValidationError(f"hfov_rad must be in (0, pi): {self.hfov_rad}")

    @classmethod
    def from_focal(cls, resolution_h: int, resolution_v: int, focal_px: float) -> "CameraIntrinsics":
        if focal_px <= 0:
            raise ValidationError(f"focal_px must be positive: {focal_px}")
        return cls(resolution_h, resolution_v, 2.0 * math.atan(resolution_h / (2.0 * focal_px)))

    @property
    def fx(self) -> float:
        return (self.resolution_h / 2.0) / math.tan(self.hfov_rad / 2.0)

    @property
    def fy(self) -> float:
        return self.fx  # square pixels

    @property
    def cx(self) -> float:
        return self.resolution_h / 2.0

    @property
    def cy(self) -> float:
        return self.resolution_v / 2.0

    @property
    def matrix(self) -> np.ndarray:
        """3x3 intrinsic matrix K."""
        return np.array([[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class Pose:
    """Rigid transform: orthonormal rotation (det +1) plus translation in metres."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        R = np.asarray(self.rotation, dtype=float)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if R.shape != (3, 3):
            raise ValidationError(f"rotation must be 3x3, got {R.shape}")
        if not np.isfinite(R).all() or not np.isfinite(t).all():
            raise ValidationError("pose contains non-finite values")
        if np.abs(R.T @ R - np.eye(3)).max() > _ORTHO_TOL:
            raise ValidationError("rotation is not orthonormal within 1e-9")
        if abs(np.linalg.det(R) - 1.0) > _ORTHO_TOL:
            raise ValidationError("rotation determinant is not +1 within 1e-9")
        R = R.copy()
        t = t.copy()
        R.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))


@dataclass(frozen=True)
class TagDetection:
    """Four ordered corner pixels of one observed tag."""

    tag_id: int
    corners_px: tuple[tuple[float, float], ...]
    tag_size_m: float

    def __post_init__(self) -> None:
        if self.tag_size_m <= 0:
            raise ValidationError(f"tag_size_m must be positive: {self.tag_size_m}")
        corners = tuple((float(u), float(v)) for u, v in self.corners_px)
        if len(corners) != 4:
            raise ValidationError(f"a detection has exactly 4 corners, got {len(corners)}")
        if not _strictly_convex(corners):
            raise ValidationError("corners do not form a strictly convex quadrilateral")
        object.__setattr__(self, "corners_px", corners)

    def corner_array(self) -> np.ndarray:
        return np.array(self.corners_px, dtype=float)


def _strictly_convex(corners: Sequence[tuple[float, float]]) -> bool:
    sign = 0.0
    for i in range(4):
        ax, ay = corners[i]
        bx, by = corners[(i + 1) % 4]
        cx, cy = corners[(i + 2) % 4]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross == 0.0:
            return False
        if sign == 0.0:
            sign = cross
        elif cross * sign < 0.0:
            return False
    return True


def tag_corners_local(tag_size_m: float) -> np.ndarray:
    """Tag-frame corner coordinates in the canonical order, z = 0."""
    s = tag_size_m / 2.0
    return np.array([[-s, -s, 0.0], [s, -s, 0.0], [s, s, 0.0], [-s, s, 0.0]])


def _as_xyz(point) -> np.ndarray:
    if isinstance(point, EnuPoint):
        return np.array([point.east_m, point.north_m, point.up_m])
    arr = np.asarray(point, dtype=float).reshape(3)
    return arr


def project(camera: CameraIntrinsics, camera_pose: Pose, world_point) -> tuple[float, float]:
    """Project a world point to pixels; raises BehindCameraError when z <= 0."""
    X = _as_xyz(world_point)
    cam = camera_pose.rotation.T @ (X - camera_pose.translation)
    if cam[2] <= MIN_DEPTH_M:
        raise BehindCameraError(f"point has camera depth {cam[2]:.3g} m")
    u = camera.fx * cam[0] / cam[2] + camera.cx
    v = camera.fy * cam[1] / cam[2] + camera.cy
    return (float(u), float(v))


def project_tag(
    camera: CameraIntrinsics,
    camera_pose: Pose,
    tag_pose: Pose,
    tag_size_m: float,
    tag_id: int = 0,
) -> Optional[TagDetection]:
    """Project all four tag corners; None when any corner is behind or out of frame.

    ``tag_pose`` places the tag in the world frame. Corner order is preserved,
    so the result feeds straight into homography recovery.
    """
    corners_world = (tag_pose.rotation @ tag_corners_local(tag_size_m).T).T + tag_pose.translation
    pixels = []
    for corner in corners_world:
        try:
            u, v = project(camera, camera_pose, corner)
        except BehindCameraError:
            return None
        if not (0.0 <= u <= camera.resolution_h and 0.0 <= v <= camera.resolution_v):
            return None
        pixels.append((u, v))
    try:
        return TagDetection(tag_id, tuple(pixels), tag_size_m)
    except ValidationError:
        return None  # edge-on view: corners collapse to a non-convex sliver


def tag_world_position(camera_pose: Pose, tag_pose_in_camera: Pose) -> EnuPoint:
    """Compose camera extrinsics with a camera-frame tag pose."""
    world = camera_pose.rotation @ tag_pose_in_camera.translation + camera_pose.translation
    return EnuPoint(float(world[0]), float(world[1]), float(world[2]))


def camera_pose_from_angles(
    position: EnuPoint, yaw_deg: float, pitch_deg: float = 0.0, roll_deg: float = 0.0
) -> Pose:
    """Camera pose from compass angles in the ENU frame.

    yaw 0 faces north, 90 faces east; pitch tilts the optical axis up;
    roll spins the camera about its optical axis.
    """
    y, p, r = (math.radians(a) for a in (yaw_deg, pitch_deg, roll_deg))
    forward = np.array([math.sin(y) * math.cos(p), math.cos(y) * math.cos(p), math.sin(p)])
    world_up = np.array([0.0, 0.0, 1.0])
    right = np.cross(forward, world_up)
    n = np.linalg.norm(right)
    if n < 1e-12:
        raise ValidationError("camera cannot point straight up or down with a yaw/pitch parameterization")
    right /= n
    up = np.cross(right, forward)
    base = np.column_stack([right, -up, forward])
    roll = np.array(
        [[math.cos(r), -math.sin(r), 0.0], [math.sin(r), math.cos(r), 0.0], [0.0, 0.0, 1.0]]
    )
    return Pose(base @ roll, _as_xyz(position))
