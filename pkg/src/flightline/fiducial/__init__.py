from .family import TagFamily, generate_family, load_family, rotate90, save_family, verify_family
from .camera import (
    CameraIntrinsics,
    Pose,
    TagDetection,
    camera_pose_from_angles,
    project,
    project_tag,
    tag_world_position,
)
from .distance import DistanceQuery, max_detection_distance
from .homography import (
    apply_homography,
    homography_from_corners,
    homography_from_points,
    pose_from_homography,
    reprojection_rms_px,
)
from .dlt import (
    CalibrationPoint,
    ProjectionMatrix,
    camera_center,
    dlt_calibrate,
    pose_from_projection,
    project_with_matrix,
    projection_from_camera,
)

__all__ = [
    "TagFamily",
    "generate_family",
    "load_family",
    "rotate90",
    "save_family",
    "verify_family",
    "CameraIntrinsics",
    "Pose",
    "TagDetection",
    "camera_pose_from_angles",
    "project",
    "project_tag",
    "tag_world_position",
    "DistanceQuery",
    "max_detection_distance",
    "apply_homography",
    "homography_from_corners",
    "homography_from_points",
    "pose_from_homography",
    "reprojection_rms_px",
    "CalibrationPoint",
    "ProjectionMatrix",
    "camera_center",
    "dlt_calibrate",
    "pose_from_projection",
    "project_with_matrix",
    "projection_from_camera",
]
