"""Bilinear raster sampling with clamp-to-border semantics."""

from __future__ import annotations

import numpy as np


def sample_image_bilinear(img: np.ndarray, xy: np.ndarray) -> np.ndarray:
    """Bilinear blend of the 4 pixels around each continuous coordinate.

    img is (H, W) or (H, W, C) with pixel (row i, col j) centered at
    continuous (x=j, y=i). xy is (n, 2) as (x, y); coordinates outside
    [0, W-1] x [0, H-1] clamp to the border pixel.
    """
    image = np.asarray(img)
    scalar = image.ndim == 2
    if scalar:
        image = image[..., None]
    h, w = image.shape[:2]
    pts = np.atleast_2d(np.asarray(xy, dtype=np.float64))

    x = np.clip(pts[:, 0], 0.0, w - 1.0)
    y = np.clip(pts[:, 1], 0.0, h - 1.0)
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x0 = np.minimum(x0, w - 2) if w > 1 else x0
    y0 = np.minimum(y0, h - 2) if h > 1 else y0
    fx = x - x0 if w > 1 else np.zeros_like(x)
    fy = y - y0 if h > 1 else np.zeros_like(y)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)

    v00 = image[y0, x0]
    v01 = image[y0, x1]
    v10 = image[y1, x0]
    v11 = image[y1, x1]
    out = (
        v00 * ((1 - fx) * (1 - fy))[:, None]
        + v01 * (fx * (1 - fy))[:, None]
        + v10 * ((1 - fx) * fy)[:, None]
        + v11 * (fx * fy)[:, None]
    )
    if scalar:
        out = out[:, 0]
    if np.asarray(xy).ndim == 1:
        return out[0]
    return out
