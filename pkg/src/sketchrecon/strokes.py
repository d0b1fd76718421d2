"""Reference rasterizer for studio stroke documents.

The browser client mirrors this algorithm exactly: strokes are polylines
stamped as filled discs at unit-spaced samples along each segment, drawn in
document order. Freeform and line tools add ink, the eraser clears ink, and
mask strokes accumulate on a separate mask channel. Integer disc tests keep
the raster deterministic across implementations (<= 1 px divergence).
"""

from __future__ import annotations

import math

import numpy as np

CANVAS_SIZE = 256
TOOLS = ("freeform", "line", "eraser", "mask")


def _stamp(raster: np.ndarray, cx: float, cy: float, radius: float, value: int) -> None:
    h, w = raster.shape
    r = max(radius, 0.5)
    x0 = max(int(math.floor(cx - r)), 0)
    x1 = min(int(math.ceil(cx + r)), w - 1)
    y0 = max(int(math.floor(cy - r)), 0)
    y1 = min(int(math.ceil(cy + r)), h - 1)
    if x0 > x1 or y0 > y1:
        return
    ys = np.arange(y0, y1 + 1)[:, None]
    xs = np.arange(x0, x1 + 1)[None, :]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    raster[y0 : y1 + 1, x0 : x1 + 1][inside] = value


def _stroke_points(points: list, tool: str) -> list[tuple[float, float]]:
    pts = [(float(p[0]), float(p[1])) for p in points]
    if tool == "line" and len(pts) >= 2:
        pts = [pts[0], pts[-1]]
    return pts


def rasterize_strokes(strokes: list[dict], size: int = CANVAS_SIZE) -> tuple[np.ndarray, np.ndarray]:
    """Rasterize a stroke document. Returns (sketch, mask) uint8 {0,1} rasters.

    Each stroke is {"tool", "points": [[x, y], ...], "width": px}.
    """
    sketch = np.zeros((size, size), dtype=np.uint8)
    mask = np.zeros((size, size), dtype=np.uint8)
    for stroke in strokes:
        tool = stroke["tool"]
        if tool not in TOOLS:
            raise ValueError(f"unknown tool {tool!r}")
        width = float(stroke.get("width", 2))
        radius = width / 2.0
        pts = _stroke_points(stroke["points"], tool)
        if not pts:
            continue
        if tool == "mask":
            target, value = mask, 1
        elif tool == "eraser":
            target, value = sketch, 0
        else:
            target, value = sketch, 1
        prev = pts[0]
        _stamp(target, prev[0], prev[1], radius, value)
        for cur in pts[1:]:
            dist = math.hypot(cur[0] - prev[0], cur[1] - prev[1])
            steps = max(int(math.ceil(dist)), 1)
            for s in range(1, steps + 1):
                t = s / steps
                _stamp(
                    target,
                    prev[0] + (cur[0] - prev[0]) * t,
                    prev[1] + (cur[1] - prev[1]) * t,
                    radius,
                    value,
                )
            prev = cur
    return sketch, mask
