"""Feature lifting: rasters to a camera-aligned volume, then a learned encode.

For every cell center X of the canonical N^3 grid, the lifted volume stores
(S(x), D(x), z(X)) where x is X's projection into the sketch/depth rasters
(bilinear) and z(X) the normalized view depth of the cell. A two-layer 3D
convolutional encoder maps the 3-channel volume to the C=16 feature volume.
"""

from __future__ import annotations

from collections import OrderedDict

import numpy as np
import torch
import torch.nn as nn

from ..geom import Camera, cell_centers, project_points, sample_image_bilinear

VOLUME_RES = 64
FEATURE_CHANNELS = 16

_LUT_CAPACITY = 24
_projection_lut: OrderedDict[tuple, tuple[np.ndarray, np.ndarray]] = OrderedDict()


def camera_projection_lut(cam: Camera, n: int = VOLUME_RES) -> tuple[np.ndarray, np.ndarray]:
    """Cached (xy, z) of all n^3 cell centers under a camera. xy (n^3, 2)."""
    key = (cam.azimuth, cam.elevation, cam.image_size, n)
    hit = _projection_lut.get(key)
    if hit is not None:
        _projection_lut.move_to_end(key)
        return hit
    centers = cell_centers(n).reshape(-1, 3)
    xy, z = project_points(centers, cam)
    _projection_lut[key] = (xy, z)
    while len(_projection_lut) > _LUT_CAPACITY:
        _projection_lut.popitem(last=False)
    return xy, z


def lift_features(
    sketch: np.ndarray, depth: np.ndarray, cam: Camera, n: int = VOLUME_RES
) -> np.ndarray:
    """Build the (n, n, n, 3) lifted volume: channels (S(x), D(x), z(X))."""
    s = np.asarray(sketch)
    d = np.asarray(depth)
    if s.shape != d.shape:
        raise ValueError(f"sketch {s.shape} and depth {d.shape} differ")
    if s.shape != cam.image_size:
        raise ValueError(f"rasters {s.shape} do not match camera {cam.image_size}")
    xy, z = camera_projection_lut(cam, n)
    sv = sample_image_bilinear(s, xy)
    dv = sample_image_bilinear(d, xy)
    vol = np.stack([sv, dv, z], axis=-1).astype(np.float32)
    return vol.reshape(n, n, n, 3)


class LiftEncoder(nn.Module):
    """Two 3x3x3 convolutions, channels 3 -> 16 -> 16."""

    def __init__(self, cin: int = 3, cout: int = FEATURE_CHANNELS):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv3d(cin, cout, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv3d(cout, cout, 3, padding=1),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)


def volume_to_tensor(vol: np.ndarray) -> torch.Tensor:
    """(N, N, N, C) numpy -> (1, C, N, N, N) float32 tensor."""
    return torch.from_numpy(np.ascontiguousarray(np.moveaxis(vol, -1, 0)))[None].float()


def tensor_to_volume(t: torch.Tensor) -> np.ndarray:
    """(1, C, N, N, N) tensor -> (N, N, N, C) float32 numpy."""
    return np.moveaxis(t[0].detach().numpy(), 0, -1).copy()
