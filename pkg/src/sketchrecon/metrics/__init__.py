"""Evaluation harness: IoU, chamfer, normal consistency, study runners."""

from .harness import (
    EvalReport,
    INFORMATIVE_FIRST_VIEWS,
    LONG_RUN_CD_1E3_TARGETS,
    LONG_RUN_MULTIVIEW_TARGETS,
    VIEWPOINT_STUDY_AZIMUTHS,
    VIEWPOINT_STUDY_ELEVATIONS,
    evaluate_multiview,
    run_viewpoint_study,
)
from .measures import (
    chamfer,
    chamfer_meshes,
    iou,
    mesh_iou,
    normal_consistency,
)

__all__ = [
    "EvalReport",
    "INFORMATIVE_FIRST_VIEWS",
    "LONG_RUN_CD_1E3_TARGETS",
    "LONG_RUN_MULTIVIEW_TARGETS",
    "VIEWPOINT_STUDY_AZIMUTHS",
    "VIEWPOINT_STUDY_ELEVATIONS",
    "evaluate_multiview",
    "run_viewpoint_study",
    "chamfer",
    "chamfer_meshes",
    "iou",
    "mesh_iou",
    "normal_consistency",
]
