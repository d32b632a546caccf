import math

import numpy as np
import pytest

from flightline.errors import DegenerateGeometryError
from flightline.fiducial.camera import Pose, TagDetection, project_tag, tag_corners_local
from flightline.fiducial.homography import (
    apply_homography,
    homography_from_corners,
    homography_from_points,
    pose_from_homography,
    reprojection_rms_px,
)

from geomutil import UHD, random_visible_tag_pose, rotation_about, rotation_angle


def test_affine_case_has_no_perspective_row():
    # axis-aligned square scaled by 40 and shifted: a pure similarity
    det = TagDetection(0, ((100.0, 200.0), (120.0, 200.0), (120.0, 220.0), (100.0, 220.0)), 0.5)
    H = homography_from_corners(det)
    assert abs(H[2, 0]) < 1e-9 and abs(H[2, 1]) < 1e-9
    assert H[0, 0] == pytest.approx(40.0, abs=1e-9)


def test_corner_interpolation_exact():
    det = TagDetection(0, ((410.2, 305.7), (650.9, 312.4), (640.0, 520.3), (405.5, 508.8)), 0.5)
    H = homography_from_corners(det)
    mapped = apply_homography(H, tag_corners_local(0.5)[:, :2])
    np.testing.assert_allclose(mapped, det.corner_array(), atol=1e-9)


def test_matches_projector_plane_map_at_30_deg_yaw():
    yaw = rotation_about(np.array([0.0, 1.0, 0.0]), math.radians(30.0))
    tag_pose = Pose(yaw, np.array([0.5, -0.2, 12.0]))
    det = project_tag(UHD, Pose.identity(), tag_pose, 0.5)
    assert det is not None
    H = homography_from_corners(det)
    # the projector's own plane map, evaluated at interior points
    probe = np.array([[0.1, 0.05], [-0.15, 0.2], [0.0, 0.0], [0.21, -0.22]])
    via_h = apply_homography(H, probe)
    K = UHD.matrix
    plane = tag_pose.rotation @ np.vstack([probe.T, np.zeros(len(probe))]) + tag_pose.translation[:, None]
    via_projector = (K @ plane).T
    via_projector = via_projector[:, :2] / via_projector[:, 2:3]
    np.testing.assert_allclose(via_h, via_projector, atol=1e-6)


def test_collinear_corners_raise_singular():
    src = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    dst = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(DegenerateGeometryError):
        homography_from_points(src, dst)


def test_centered_facing_tag_pose():
    tag_pose = Pose(np.eye(3), np.array([0.0, 0.0, 10.0]))
    det = project_tag(UHD, Pose.identity(), tag_pose, 0.5)
    recovered = pose_from_homography(homography_from_corners(det), UHD)
    np.testing.assert_allclose(recovered.translation, [0.0, 0.0, 10.0], atol=1e-6)
    assert rotation_angle(recovered.rotation, np.eye(3)) < 1e-6


def test_round_trip_random_poses():
    rng = np.random.default_rng(2024)
    for _ in range(40):
        truth = random_visible_tag_pose(rng, depth_range=(2.0, 60.0))
        det = project_tag(UHD, Pose.identity(), truth, 0.5)
        if det is None:
            continue
        recovered = pose_from_homography(homography_from_corners(det), UHD)
        assert np.linalg.norm(recovered.translation - truth.translation) < 1e-6
        assert rotation_angle(recovered.rotation, truth.rotation) < 1e-6
        assert reprojection_rms_px(det, UHD, recovered) < 1e-6


def test_rotation_always_orthonormal_even_with_noise():
    rng = np.random.default_rng(7)
    for _ in range(50):
        truth = random_visible_tag_pose(rng, depth_range=(5.0, 40.0))
        det = project_tag(UHD, Pose.identity(), truth, 0.5)
        if det is None:
            continue
        noisy = tuple(
            (u + rng.normal(0, 0.5), v + rng.normal(0, 0.5)) for u, v in det.corners_px
        )
        try:
            noisy_det = TagDetection(det.tag_id, noisy, det.tag_size_m)
        except Exception:
            continue
        pose = pose_from_homography(homography_from_corners(noisy_det), UHD)
        # Pose construction enforces orthonormality within 1e-9; also check z > 0
        assert pose.translation[2] > 0


def test_noise_degrades_with_distance():
    # the farther the tag, the more uncertain its recovered position
    def median_error(depth: float, seed: int) -> float:
        rng = np.random.default_rng(seed)
        errors = []
        while len(errors) < 100:
            truth = random_visible_tag_pose(rng, depth_range=(depth, depth), max_tilt=0.5)
            det = project_tag(UHD, Pose.identity(), truth, 0.5)
            if det is None:
                continue
            noisy = tuple(
                (u + rng.normal(0, 0.5), v + rng.normal(0, 0.5)) for u, v in det.corners_px
            )
            try:
                noisy_det = TagDetection(det.tag_id, noisy, det.tag_size_m)
            except Exception:
                continue
            pose = pose_from_homography(homography_from_corners(noisy_det), UHD)
            errors.append(float(np.linalg.norm(pose.translation - truth.translation)))
        return float(np.median(errors))

    assert median_error(40.0, seed=11) > median_error(10.0, seed=12)
