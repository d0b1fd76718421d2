"""Iterative modeling sessions: generate, refine, masked edit, scale, extract."""

from .editmask import EditMask3D, build_edit_masks, compute_edit_mask_3d
from .session import (
    DEFAULT_DILATION_KERNEL,
    DEFAULT_MC_RESOLUTION,
    DEFAULT_SIGMA,
    Engine,
    SessionConfig,
    SessionState,
    SessionStateError,
)
from .snapshot import load_history, load_session, save_session

__all__ = [
    "EditMask3D",
    "build_edit_masks",
    "compute_edit_mask_3d",
    "DEFAULT_DILATION_KERNEL",
    "DEFAULT_MC_RESOLUTION",
    "DEFAULT_SIGMA",
    "Engine",
    "SessionConfig",
    "SessionState",
    "SessionStateError",
    "load_history",
    "load_session",
    "save_session",
]
