"""Voxel grids over the canonical cube, trilinear sampling, mask dilation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

CUBE_MIN = -0.5
CUBE_MAX = 0.5
PAD_FRACTION = 0.05


@dataclass(frozen=True)
class CanonicalCube:
    """Axis-aligned cube that contains every normalized shape."""

    extent: tuple[float, float] = (CUBE_MIN, CUBE_MAX)
    pad_fraction: float = PAD_FRACTION

    @property
    def side(self) -> float:
        return self.extent[1] - self.extent[0]

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points))
        lo, hi = self.extent
        return np.all((p > lo) & (p < hi), axis=-1)


def axis_coords(n: int) -> np.ndarray:
    """Cell-center coordinates along one axis; n cells tile the cube exactly."""
    return CUBE_MIN + (np.arange(n) + 0.5) / n


def cell_centers(n: int) -> np.ndarray:
    """(n, n, n, 3) world positions of cell centers, index order (x, y, z)."""
    c = axis_coords(n)
    gx, gy, gz = np.meshgrid(c, c, c, indexing="ij")
    return np.stack([gx, gy, gz], axis=-1)


@dataclass
class VoxelGrid:
    """N^3 grid of scalar or vector payloads aligned to the canonical cube.

    values has shape (N, N, N) or (N, N, N, C); values[i, j, k] belongs to
    the cell centered at (axis_coords(N)[i], ...[j], ...[k]).
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim not in (3, 4) or len({v.shape[0], v.shape[1], v.shape[2]}) != 1:
            raise ValueError(f"expected (N,N,N[,C]) payload, got shape {v.shape}")
        self.values = v

    @property
    def resolution(self) -> int:
        return self.values.shape[0]

    def centers(self) -> np.ndarray:
        return cell_centers(self.resolution)


def sample_volume_trilinear(vol: np.ndarray | VoxelGrid, points: np.ndarray) -> np.ndarray:
    """Trilinear blend of the 8 cells around each point; clamps to border.

    vol is (N, N, N) or (N, N, N, C); points is (n, 3) in cube coordinates.
    Returns (n,) or (n, C).
    """
    values = vol.values if isinstance(vol, VoxelGrid) else np.asarray(vol)
    scalar = values.ndim == 3
    if scalar:
        values = values[..., None]
    n = values.shape[0]
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))

    # Continuous index of a point: cell centers sit at index i <-> coord
    # CUBE_MIN + (i + 0.5)/n.
    idx = (pts - CUBE_MIN) * n - 0.5
    idx = np.clip(idx, 0.0, n - 1.0)
    i0 = np.floor(idx).astype(np.int64)
    i0 = np.minimum(i0, n - 2) if n > 1 else i0
    frac = idx - i0
    if n == 1:
        frac = np.zeros_like(idx)
    i1 = np.minimum(i0 + 1, n - 1)

    out = np.zeros((pts.shape[0], values.shape[-1]), dtype=values.dtype if values.dtype.kind == "f" else np.float64)
    for dx, wx in ((0, 1.0), (1, None)):
        for dy, wy in ((0, 1.0), (1, None)):
            for dz, wz in ((0, 1.0), (1, None)):
                ix = i0[:, 0] if dx == 0 else i1[:, 0]
                iy = i0[:, 1] if dy == 0 else i1[:, 1]
                iz = i0[:, 2] if dz == 0 else i1[:, 2]
                w = (
                    (1.0 - frac[:, 0] if dx == 0 else frac[:, 0])
                    * (1.0 - frac[:, 1] if dy == 0 else frac[:, 1])
                    * (1.0 - frac[:, 2] if dz == 0 else frac[:, 2])
                )
                out += w[:, None] * values[ix, iy, iz]
    if scalar:
        out = out[:, 0]
    if np.asarray(points).ndim == 1:
        return out[0]
    return out


def dilate_mask(mask: np.ndarray | VoxelGrid, k: int) -> np.ndarray:
    """Box dilation: a cell is set iff any cell in the k^3 box around it is set.

    The box is clipped at grid borders. k must be odd and >= 1.
    """
    if k < 1 or k % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 1, got {k}")
    values = mask.values if isinstance(mask, VoxelGrid) else np.asarray(mask)
    m = values.astype(bool)
    if k == 1:
        return m.copy()
    structure = np.ones((k, k, k), dtype=bool)
    return ndimage.binary_dilation(m, structure=structure, border_value=0)
