"""Orthographic look-at cameras over the canonical shape cube.

Coordinate conventions
----------------------
Shapes live in the canonical cube [-0.5, 0.5]^3. A camera is an orthographic
look-at defined by (azimuth, elevation) in degrees: the eye sits on the ray
``(cos(el)*sin(az), sin(el), cos(el)*cos(az))`` from the cube center and looks
back at it, with world +Y as the up reference. Azimuth 0 places the eye on +Z.

Image space is row-major with origin at the top-left: a continuous pixel
coordinate (x, y) has x growing rightward (columns) and y growing downward
(rows). Pixel (row i, col j) is centered at the continuous coordinate (j, i).
The cube's bounding sphere (radius sqrt(3)/2) maps to the full image extent,
so every cube point projects inside the frame at any viewpoint, and the cube
center projects to (W/2, H/2) exactly.

Depth is view-space distance normalized linearly over the slab tangent to the
bounding sphere: 0 is the near slab plane, 1 the far one, and the cube center
is always at 0.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Radius of the sphere through the canonical cube's corners; also half the
# depth-slab thickness and half the world width of the image.
SPHERE_RADIUS = math.sqrt(3.0) / 2.0

DEFAULT_IMAGE_SIZE = (256, 256)


@dataclass(frozen=True)
class Camera:
    """Viewpoint: azimuth/elevation in degrees plus raster size (H, W)."""

    azimuth: float
    elevation: float
    image_size: tuple[int, int] = DEFAULT_IMAGE_SIZE

    def __post_init__(self):
        object.__setattr__(self, "azimuth", float(self.azimuth) % 360.0)
        object.__setattr__(self, "elevation", float(self.elevation))

    @property
    def height(self) -> int:
        return self.image_size[0]

    @property
    def width(self) -> int:
        return self.image_size[1]

    def basis(self) -> np.ndarray:
        """Rows: right, up, forward (unit vectors, world coordinates)."""
        return _camera_basis(self.azimuth, self.elevation)

    def to_json(self) -> dict:
        return {
            "azimuth_deg": self.azimuth,
            "elevation_deg": self.elevation,
            "height": self.height,
            "width": self.width,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Camera":
        size = (int(obj.get("height", 256)), int(obj.get("width", 256)))
        return cls(float(obj["azimuth_deg"]), float(obj["elevation_deg"]), size)


@lru_cache(maxsize=512)
def _camera_basis(azimuth: float, elevation: float) -> np.ndarray:
    az = math.radians(azimuth)
    el = math.radians(elevation)
    eye_dir = np.array(
        [math.cos(el) * math.sin(az), math.sin(el), math.cos(el) * math.cos(az)]
    )
    forward = -eye_dir
    up_ref = np.array([0.0, 1.0, 0.0])
    right = np.cross(forward, up_ref)
    norm = np.linalg.norm(right)
    if norm < 1e-12:
        # Looking straight up/down: fall back to an azimuth-aligned right.
        right = np.array([math.cos(az), 0.0, -math.sin(az)])
        norm = np.linalg.norm(right)
    right = right / norm
    up = np.cross(right, forward)
    return np.stack([right, up, forward])


def project_points(points: np.ndarray, cam: Camera) -> tuple[np.ndarray, np.ndarray]:
    """Project (n, 3) cube points to continuous pixel coords and depths.

    Returns (xy, z): xy is (n, 2) as (x=col, y=row); z is (n,) normalized
    depth in [0, 1] for any point inside the bounding sphere.
    """
    pts = np.asarray(points, dtype=np.float64)
    squeeze = pts.ndim == 1
    pts = np.atleast_2d(pts)
    right, up, forward = cam.basis()
    u = pts @ right
    v = pts @ up
    d = pts @ forward
    h, w = cam.image_size
    x = (u / (2.0 * SPHERE_RADIUS) + 0.5) * w
    y = (-v / (2.0 * SPHERE_RADIUS) + 0.5) * h
    z = (d + SPHERE_RADIUS) / (2.0 * SPHERE_RADIUS)
    xy = np.stack([x, y], axis=-1)
    if squeeze:
        return xy[0], float(z[0])
    return xy, z


def project_point(point, cam: Camera) -> tuple[tuple[float, float], float]:
    """Scalar convenience wrapper around :func:`project_points`."""
    xy, z = project_points(np.asarray(point, dtype=np.float64), cam)
    return (float(xy[0]), float(xy[1])), float(z)
