#!/usr/bin/env python3
"""From four corner pixels to a 3D tag pose, and how distance hurts accuracy.

The synthetic projector stages a tag at a known pose, projects its corners
through a pinhole camera, and the recovery chain (exact 4-point homography,
then factoring K^-1 H into a rigid pose) runs backwards. Noiseless recovery
is exact to floating-point; with half-pixel corner noise the position error
grows sharply with range, which is exactly the behaviour you see in the
field: far tags wander on the map.
"""

import math

import numpy as np

from flightline.fiducial.camera import CameraIntrinsics, Pose, project_tag, TagDetection
from flightline.fiducial.homography import homography_from_corners, pose_from_homography

CAM = CameraIntrinsics(3840, 2160, math.radians(70.0))
rng = np.random.default_rng(7)


def stage_and_recover(depth_m: float, noise_px: float = 0.0):
    """Place a 0.5 m tag at the given depth with a small random tilt, recover it."""
    tilt = rng.uniform(-0.4, 0.4)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    R = np.eye(3) + math.sin(tilt) * K + (1 - math.cos(tilt)) * (K @ K)
    truth = Pose(R, np.array([rng.uniform(-2, 2), rng.uniform(-1, 1), depth_m]))
    det = project_tag(CAM, Pose.identity(), truth, 0.5)
    if det is None:
        return None
    if noise_px > 0.0:
        corners = tuple(
            (u + rng.normal(0, noise_px), v + rng.normal(0, noise_px)) for u, v in det.corners_px
        )
        try:
            det = TagDetection(det.tag_id, corners, det.tag_size_m)
        except Exception:
            return None
    recovered = pose_from_homography(homography_from_corners(det), CAM)
    return float(np.linalg.norm(recovered.translation - truth.translation))


print("Noiseless recovery is exact to numerical precision:")
for depth in (5.0, 20.0, 50.0):
    errs = [e for e in (stage_and_recover(depth) for _ in range(50)) if e is not None]
    print(f"  depth {depth:>4.0f} m: worst position error {max(errs):.2e} m over {len(errs)} poses")

print()
print("With 0.5 px corner noise, uncertainty grows with distance:")
print(f"{'depth':>7} | {'median err':>10} | {'p90 err':>10}")
for depth in (5.0, 10.0, 20.0, 30.0, 40.0):
    errs = []
    while len(errs) < 200:
        e = stage_and_recover(depth, noise_px=0.5)
        if e is not None:
            errs.append(e)
    errs = np.sort(errs)
    print(f"{depth:>5.0f} m | {errs[99]:>8.3f} m | {errs[179]:>8.3f} m")

print()
print("Rule of thumb from the table: past the printable-tag detection range,")
print("position quality degrades faster than detectability.")
