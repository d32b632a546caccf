"""Direct linear transform calibration of a camera's 3x4 projection matrix.

Each 3D-2D correspondence contributes two rows to the standard 2n x 12
homogeneous system; the solution is the right singular direction of smallest
singular value. Pixel and world coordinates are Hartley-normalized first
(centroid to the origin, mean distance sqrt(2) resp. sqrt(3)) because the
unnormalized system is numerically fragile. The result is scaled so the first
three entries of the last row have unit norm and signed so the calibration
points sit at positive depth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateGeometryError, ValidationError
from ..geodesy import EnuPoint
from .camera import CameraIntrinsics, Pose

MIN_CALIBRATION_POINTS = 6

# world-point scatter below this ratio of the largest axis counts as coplanar
_COPLANARITY_RATIO = 1e-8


@dataclass(frozen=True)
class CalibrationPoint:
    """A known world position and where it landed in the image."""

    world: EnuPoint
    pixel: tuple[float, float]


@dataclass(frozen=True)
class ProjectionMatrix:
    """3x4 camera projection, defined up to scale; stored with ||m3|| = 1."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        P = np.asarray(self.matrix, dtype=float)
        if P.shape != (3, 4):
            raise ValidationError(f"projection matrix must be 3x4, got {P.shape}")
        norm = np.linalg.norm(P[2, :3])
        if norm < 1e-15:
            raise ValidationError("last row of the projection matrix has no rotational part")
        P = P / norm
        P.flags.writeable = False
        object.__setattr__(self, "matrix", P)


def _normalize_pixels(px: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centroid = px.mean(axis=0)
    mean_dist = np.sqrt(((px - centroid) ** 2).sum(axis=1)).mean()
    if mean_dist < 1e-12:
        raise DegenerateGeometryError("all pixel observations coincide")
    s = np.sqrt(2.0) / mean_dist
    T = np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])
    return T, (px - centroid) * s


def _normalize_world(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centroid = w.mean(axis=0)
    mean_dist = np.sqrt(((w - centroid) ** 2).sum(axis=1)).mean()
    if mean_dist < 1e-12:
        raise DegenerateGeometryError("all world points coincide")
    s = np.sqrt(3.0) / mean_dist
    T = np.eye(4)
    T[0, 0] = T[1, 1] = T[2, 2] = s
    T[:3, 3] = -s * centroid
    return T, (w - centroid) * s


def _check_not_coplanar(world: np.ndarray) -> None:
    centered = world - world.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[0] < 1e-12 or svals[2] / svals[0] < _COPLANARITY_RATIO:
        raise DegenerateGeometryError(
            "calibration points are coplanar (or nearly so); the DLT system is rank deficient"
        )


def dlt_calibrate(points: list[CalibrationPoint]) -> tuple[ProjectionMatrix, float]:
    """Estimate the projection matrix; returns it with the reprojection RMS in pixels."""
    if len(points) < MIN_CALIBRATION_POINTS:
        raise ValidationError(f"DLT needs at least {MIN_CALIBRATION_POINTS} points, got {len(points)}")
    world = np.array([[p.world.east_m, p.world.north_m, p.world.up_m] for p in points])
    px = np.array([p.pixel for p in points], dtype=float)
    _check_not_coplanar(world)

    Tp, pxn = _normalize_pixels(px)
    Tw, wn = _normalize_world(world)
    n = len(points)
    A = np.zeros((2 * n, 12))
    for i in range(n):
        X = np.array([wn[i, 0], wn[i, 1], wn[i, 2], 1.0])
        u, v = pxn[i]
        A[2 * i, 0:4] = X
        A[2 * i, 8:12] = -u * X
        A[2 * i + 1, 4:8] = X
        A[2 * i + 1, 8:12] = -v * X
    _, _, Vt = np.linalg.svd(A)
    P = Vt[-1].reshape(3, 4)
    P = np.linalg.inv(Tp) @ P @ Tw
    P = P / np.linalg.norm(P[2, :3])

    homog = np.hstack([world, np.ones((n, 1))])
    depths = (P @ homog.T)[2]
    if depths.mean() < 0:
        P = -P
    proj = (P @ homog.T).T
    proj = proj[:, :2] / proj[:, 2:3]
    rms = float(np.sqrt(np.mean(np.sum((proj - px) ** 2, axis=1))))
    return ProjectionMatrix(P), rms


def camera_center(P: ProjectionMatrix) -> EnuPoint:
    """Camera position: the dehomogenized right null direction, C = -M^-1 p4."""
    M = P.matrix[:, :3]
    if abs(np.linalg.det(M)) < 1e-12:
        raise DegenerateGeometryError("left 3x3 block of the projection matrix is singular")
    C = -np.linalg.solve(M, P.matrix[:, 3])
    return EnuPoint(float(C[0]), float(C[1]), float(C[2]))


def project_with_matrix(P: ProjectionMatrix, world) -> tuple[float, float]:
    """Project one world point through a 3x4 matrix (positive depth required)."""
    if isinstance(world, EnuPoint):
        X = np.array([world.east_m, world.north_m, world.up_m, 1.0])
    else:
        X = np.append(np.asarray(world, dtype=float).reshape(3), 1.0)
    q = P.matrix @ X
    if q[2] <= 0:
        raise DegenerateGeometryError("point projects to non-positive depth")
    return (float(q[0] / q[2]), float(q[1] / q[2]))


def projection_from_camera(camera: CameraIntrinsics, camera_pose: Pose) -> ProjectionMatrix:
    """Ground-truth P = K [R^T | -R^T C] for a camera with known pose."""
    Rt = camera_pose.rotation.T
    ext = np.hstack([Rt, (-Rt @ camera_pose.translation).reshape(3, 1)])
    return ProjectionMatrix(camera.matrix @ ext)


def pose_from_projection(P: ProjectionMatrix, camera: CameraIntrinsics) -> Pose:
    """Extrinsics from a calibrated projection matrix and known intrinsics.

    K^-1 [M | p4] equals lambda [R^T | -R^T C]; the polar factor of the left
    block recovers R exactly for noiseless input and the nearest rotation
    otherwise. The overall sign is already fixed by dlt_calibrate.
    """
    M = np.linalg.solve(camera.matrix, P.matrix[:, :3])
    if np.linalg.det(M) <= 0:
        raise DegenerateGeometryError("projection matrix is left-handed; cannot be a physical camera")
    U, _, Vt = np.linalg.svd(M.T)
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U = U.copy()
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    center = camera_center(P)
    return Pose(R, np.array([center.east_m, center.north_m, center.up_m]))
