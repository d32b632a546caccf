#!/usr/bin/env python3
"""Calibrating a camera's position from known points in its view.

Survey a handful of world points (corners of painted markings, light poles,
anything with known ENU coordinates), click their pixel positions in a
frame, and the direct linear transform recovers the full 3x4 projection
matrix; its null space is the camera's position. Six points is the
mathematical minimum; more points plus spread in depth buy noise immunity.
"""

import math

import numpy as np

from flightline.fiducial.camera import CameraIntrinsics, camera_pose_from_angles, project
from flightline.fiducial.dlt import CalibrationPoint, camera_center, dlt_calibrate, pose_from_projection
from flightline.geodesy import EnuPoint

CAM = CameraIntrinsics(3840, 2160, math.radians(70.0))

# ground truth: camera mounted 4 m up at the tower, looking north-east
TRUTH = camera_pose_from_angles(EnuPoint(12.0, -8.0, 4.0), yaw_deg=45.0, pitch_deg=-3.0)
rng = np.random.default_rng(3)


def surveyed_points(n: int, noise_px: float) -> list[CalibrationPoint]:
    points = []
    for _ in range(n):
        z = rng.uniform(8.0, 60.0)
        u = rng.uniform(0.1, 0.9) * CAM.resolution_h
        v = rng.uniform(0.1, 0.9) * CAM.resolution_v
        ray = np.array([(u - CAM.cx) / CAM.fx * z, (v - CAM.cy) / CAM.fy * z, z])
        world = TRUTH.rotation @ ray + TRUTH.translation
        px = np.array(project(CAM, TRUTH, world)) + rng.normal(0.0, noise_px, 2)
        points.append(CalibrationPoint(EnuPoint(*world), tuple(px)))
    return points


print(f"True camera position: east=12.0 north=-8.0 up=4.0")
print()
print("Noiseless, 8 points:")
P, rms = dlt_calibrate(surveyed_points(8, 0.0))
C = camera_center(P)
print(f"  recovered ({C.east_m:.9f}, {C.north_m:.9f}, {C.up_m:.9f}), reprojection rms {rms:.2e} px")

pose = pose_from_projection(P, CAM)
axis_err = np.degrees(
    math.acos(min(1.0, max(-1.0, float(np.dot(pose.rotation[:, 2], TRUTH.rotation[:, 2])))))
)
print(f"  optical-axis direction error: {axis_err:.2e} degrees")

print()
print("Half-pixel click noise, varying survey size (100 trials each):")
print(f"{'points':>7} | {'median err':>10} | {'p95 err':>10}")
for n in (6, 10, 20, 40):
    errs = []
    for _ in range(100):
        Pn, _ = dlt_calibrate(surveyed_points(n, 0.5))
        Cn = camera_center(Pn)
        errs.append(
            np.linalg.norm([Cn.east_m - 12.0, Cn.north_m + 8.0, Cn.up_m - 4.0])
        )
    errs = np.sort(errs)
    print(f"{n:>7} | {errs[49]:>8.3f} m | {errs[94]:>8.3f} m")

print()
print("Takeaway: 20 well-spread points put the camera within centimetres,")
print("which is far below the GPS error of the assets being tracked.")
