"""Plane-to-image homographies and planar pose recovery.

``homography_from_points`` solves the four-point map exactly: eight equations
in the eight unknowns of H with H[2][2] fixed at 1. ``pose_from_homography``
factors K^-1 H into the tag's rigid pose in the camera frame, snapping the
rotation to the nearest orthonormal matrix via its polar factor.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateGeometryError
from .camera import CameraIntrinsics, Pose, TagDetection, tag_corners_local


def homography_from_points(src_xy: np.ndarray, dst_xy: np.ndarray) -> np.ndarray:
    """Exact 3x3 homography mapping four source points onto four destinations."""
    src = np.asarray(src_xy, dtype=float).reshape(4, 2)
    dst = np.asarray(dst_xy, dtype=float).reshape(4, 2)
    A = np.zeros((8, 8))
    b = np.zeros(8)
    for i, ((x, y), (u, v)) in enumerate(zip(src, dst)):
        A[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y]
        b[2 * i] = u
        A[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y]
        b[2 * i + 1] = v
    try:
        h = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateGeometryError(f"corner configuration is singular: {exc}") from exc
    return np.array([[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]])


def homography_from_corners(detection: TagDetection) -> np.ndarray:
    """Homography taking tag-plane metres (corner order fixed) to observed pixels."""
    src = tag_corners_local(detection.tag_size_m)[:, :2]
    return homography_from_points(src, detection.corner_array())


def apply_homography(H: np.ndarray, xy: np.ndarray) -> np.ndarray:
    """Map n x 2 plane points through H, dehomogenizing."""
    pts = np.asarray(xy, dtype=float).reshape(-1, 2)
    ones = np.ones((len(pts), 1))
    q = (H @ np.hstack([pts, ones]).T).T
    return q[:, :2] / q[:, 2:3]


def pose_from_homography(H: np.ndarray, camera: CameraIntrinsics) -> Pose:
    """Recover the tag's pose in the camera frame from its plane homography.

    With A = K^-1 H, the columns of A are proportional to (r1, r2, t); the
    scale is fixed by requiring unit rotation columns, the sign by a positive
    tag depth, and r3 = r1 x r2 completes the rotation before the polar
    factor enforces exact orthonormality.
    """
    K = camera.matrix
    A = np.linalg.solve(K, np.asarray(H, dtype=float))
    n1, n2 = np.linalg.norm(A[:, 0]), np.linalg.norm(A[:, 1])
    if n1 < 1e-12 or n2 < 1e-12:
        raise DegenerateGeometryError("homography collapses the tag plane through the camera center")
    lam = 2.0 / (n1 + n2)
    if lam * A[2, 2] < 0:
        lam = -lam  # keep the tag in front of the camera
    r1 = lam * A[:, 0]
    r2 = lam * A[:, 1]
    r3 = np.cross(r1, r2)
    translation = lam * A[:, 2]
    M = np.column_stack([r1, r2, r3])
    U, _, Vt = np.linalg.svd(M)
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U = U.copy()
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return Pose(R, translation)


def reprojection_rms_px(detection: TagDetection, camera: CameraIntrinsics, tag_pose_in_camera: Pose) -> float:
    """RMS pixel error of the detection's corners against a recovered pose."""
    corners = tag_corners_local(detection.tag_size_m)
    cam_pts = (tag_pose_in_camera.rotation @ corners.T).T + tag_pose_in_camera.translation
    if np.any(cam_pts[:, 2] <= 0):
        raise DegenerateGeometryError("recovered pose places corners behind the camera")
    proj = (camera.matrix @ cam_pts.T).T
    proj = proj[:, :2] / proj[:, 2:3]
    diff = proj - detection.corner_array()
    return float(np.sqrt(np.mean(np.sum(diff * diff, axis=1))))
