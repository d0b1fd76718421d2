"""Software depth rasterizer for orthographic cameras.

Rasterizes triangles with a z-buffer over pixel centers; pixel (row i, col j)
samples the continuous image coordinate (x=j, y=i). Uncovered pixels hold
exactly 1.0. The front buffer keeps the nearest normalized depth per pixel,
the back buffer the farthest, so for a watertight mesh they bound the solid
along each view ray.
"""

from __future__ import annotations

import numpy as np

from ..geom import Camera, Mesh, project_points

_EDGE_EPS = 1e-9


def render_depth_pair(mesh: Mesh, cam: Camera) -> tuple[np.ndarray, np.ndarray]:
    """Render (front, back) depth maps in one pass."""
    h, w = cam.image_size
    if mesh.is_empty():
        bg = np.ones((h, w), dtype=np.float64)
        return bg, bg.copy()

    xy, z = project_points(mesh.vertices, cam)
    fx = xy[mesh.faces, 0]  # (m, 3)
    fy = xy[mesh.faces, 1]
    fz = z[mesh.faces]

    near = np.full((h, w), np.inf)
    far = np.full((h, w), -np.inf)

    x_min = np.maximum(np.ceil(fx.min(axis=1) - _EDGE_EPS), 0).astype(np.int64)
    x_max = np.minimum(np.floor(fx.max(axis=1) + _EDGE_EPS), w - 1).astype(np.int64)
    y_min = np.maximum(np.ceil(fy.min(axis=1) - _EDGE_EPS), 0).astype(np.int64)
    y_max = np.minimum(np.floor(fy.max(axis=1) + _EDGE_EPS), h - 1).astype(np.int64)
    valid = (x_min <= x_max) & (y_min <= y_max)

    for t in np.nonzero(valid)[0]:
        x0, x1, x2 = fx[t]
        y0, y1, y2 = fy[t]
        denom = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2)
        if abs(denom) < 1e-14:
            continue
        xs = np.arange(x_min[t], x_max[t] + 1, dtype=np.float64)
        ys = np.arange(y_min[t], y_max[t] + 1, dtype=np.float64)
        px, py = np.meshgrid(xs, ys)
        l0 = ((y1 - y2) * (px - x2) + (x2 - x1) * (py - y2)) / denom
        l1 = ((y2 - y0) * (px - x2) + (x0 - x2) * (py - y2)) / denom
        l2 = 1.0 - l0 - l1
        inside = (l0 >= -_EDGE_EPS) & (l1 >= -_EDGE_EPS) & (l2 >= -_EDGE_EPS)
        if not inside.any():
            continue
        zp = l0 * fz[t, 0] + l1 * fz[t, 1] + l2 * fz[t, 2]
        ys0 = int(y_min[t])
        xs0 = int(x_min[t])
        sub_near = near[ys0 : ys0 + len(ys), xs0 : xs0 + len(xs)]
        sub_far = far[ys0 : ys0 + len(ys), xs0 : xs0 + len(xs)]
        np.minimum(sub_near, np.where(inside, zp, np.inf), out=sub_near)
        np.maximum(sub_far, np.where(inside, zp, -np.inf), out=sub_far)

    covered = np.isfinite(near)
    front = np.where(covered, near, 1.0)
    back = np.where(covered, far, 1.0)
    return front, back


def render_depth(mesh: Mesh, cam: Camera) -> np.ndarray:
    """Nearest-surface normalized depth per pixel; background 1.0."""
    return render_depth_pair(mesh, cam)[0]


def render_back_depth(mesh: Mesh, cam: Camera) -> np.ndarray:
    """Farthest-surface normalized depth per pixel; background 1.0."""
    return render_depth_pair(mesh, cam)[1]
