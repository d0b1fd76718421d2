"""Sweeping a 2D edit mask into the 3D feature volume.

Per masked pixel the affected depth interval is [min(D, d_f),
min(max(D, d_f), d_b)]: from the newly drawn surface to the front of the
existing solid when adding material in front, or spanning the old solid when
the new surface moves behind it. A cell is marked iff its projection lands
on a masked pixel and its view depth falls inside that pixel's interval.
Uncovered pixels carry d_f = d_b = 1, so the interval degenerates to [D, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geom import Camera, dilate_mask
from ..nets import camera_projection_lut


@dataclass
class EditMask3D:
    """Swept edit region and its dilated variant (mask is a subset)."""

    mask: np.ndarray
    dilated: np.ndarray

    def __post_init__(self):
        if self.mask.shape != self.dilated.shape:
            raise ValueError("mask/dilated resolution mismatch")
        if np.any(self.mask & ~self.dilated):
            raise ValueError("dilated mask must contain the base mask")


def compute_edit_mask_3d(
    mask2d: np.ndarray,
    depth_pred: np.ndarray,
    depth_front: np.ndarray,
    depth_back: np.ndarray,
    cam: Camera,
    n: int = 64,
) -> np.ndarray:
    """Boolean (n, n, n) swept mask; nearest-pixel lookups for all rasters."""
    m2d = np.asarray(mask2d)
    rasters = (m2d, np.asarray(depth_pred), np.asarray(depth_front), np.asarray(depth_back))
    for r in rasters:
        if r.shape != cam.image_size:
            raise ValueError(f"raster shape {r.shape} != camera {cam.image_size}")
    h, w = cam.image_size
    xy, z = camera_projection_lut(cam, n)
    px = np.clip(np.floor(xy[:, 0] + 0.5).astype(np.int64), 0, w - 1)
    py = np.clip(np.floor(xy[:, 1] + 0.5).astype(np.int64), 0, h - 1)

    masked = rasters[0][py, px] > 0.5
    d = rasters[1][py, px]
    df = rasters[2][py, px]
    db = rasters[3][py, px]
    d_min = np.minimum(d, df)
    d_max = np.minimum(np.maximum(d, df), db)
    inside = masked & (z >= d_min) & (z <= d_max)
    return inside.reshape(n, n, n)


def build_edit_masks(
    mask2d, depth_pred, depth_front, depth_back, cam: Camera, kernel: int, n: int = 64
) -> EditMask3D:
    m = compute_edit_mask_3d(mask2d, depth_pred, depth_front, depth_back, cam, n)
    return EditMask3D(mask=m, dilated=dilate_mask(m, kernel))
