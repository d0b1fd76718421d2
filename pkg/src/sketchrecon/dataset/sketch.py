"""Line-drawing synthesis from depth maps and drawing-guide shadows."""

from __future__ import annotations

import numpy as np
import cv2

DEFAULT_BLOCK_SIZE = 11
DEFAULT_OFFSET = 0.03  # normalized depth units


def synthesize_sketch(
    depth: np.ndarray,
    block_size: int = DEFAULT_BLOCK_SIZE,
    offset: float = DEFAULT_OFFSET,
) -> np.ndarray:
    """Adaptive-threshold line extraction on a rendered depth map.

    A pixel becomes ink iff its depth is below the local block mean by more
    than `offset`, which fires on the near side of depth discontinuities:
    the silhouette plus interior creases. Deterministic given parameters.
    Returns a float32 {0, 1} raster.
    """
    d = np.asarray(depth, dtype=np.float64)
    img = np.clip(np.round(d * 255.0), 0, 255).astype(np.uint8)
    ink = cv2.adaptiveThreshold(
        img,
        1,
        cv2.ADAPTIVE_THRESH_MEAN_C,
        cv2.THRESH_BINARY_INV,
        block_size,
        offset * 255.0,
    )
    return ink.astype(np.float32)


def compute_shadow_guide(sketches: list[np.ndarray] | np.ndarray) -> np.ndarray:
    """Pixelwise mean of binary sketches, a grayscale [0, 1] drawing guide."""
    stack = np.asarray(sketches, dtype=np.float64)
    if stack.ndim != 3 or stack.shape[0] == 0:
        raise ValueError("need at least one sketch")
    return stack.mean(axis=0)
