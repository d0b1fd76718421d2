"""View aggregation and the multi-scale implicit occupancy decoder."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn

from ..geom import CUBE_MIN

from .lifter import FEATURE_CHANNELS

MS_CHANNELS = (32, 64, 128, 128)
MS_RESOLUTIONS = (64, 32, 16, 8)
POINT_FEATURE_DIM = sum(MS_CHANNELS) + 3

# Points are always decoded in constant-size padded chunks: GEMM blocking can
# change summation order with matrix shape, and the decoder must return
# bitwise-identical values regardless of batch composition.
DECODE_CHUNK = 8192


class Aggregator(nn.Module):
    """Fuses (previous aggregate, new view volume) -> new aggregate.

    Three stacked 3x3x3 convolution blocks over the channel concat,
    32 -> 32 -> 32 -> 16, residual-free.
    """

    def __init__(self, channels: int = FEATURE_CHANNELS):
        super().__init__()
        c2 = channels * 2
        self.net = nn.Sequential(
            nn.Conv3d(c2, c2, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv3d(c2, c2, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv3d(c2, channels, 3, padding=1),
        )

    def forward(self, a_prev: torch.Tensor, v_new: torch.Tensor) -> torch.Tensor:
        return self.net(torch.cat([a_prev, v_new], dim=1))


class MultiScaleEncoder(nn.Module):
    """Conv + max-pool applied recursively three times over the aggregate."""

    def __init__(self, cin: int = FEATURE_CHANNELS):
        super().__init__()
        chans = MS_CHANNELS
        self.conv0 = nn.Conv3d(cin, chans[0], 3, padding=1)
        self.conv1 = nn.Conv3d(chans[0], chans[1], 3, padding=1)
        self.conv2 = nn.Conv3d(chans[1], chans[2], 3, padding=1)
        self.conv3 = nn.Conv3d(chans[2], chans[3], 3, padding=1)
        self.act = nn.ReLU(inplace=True)
        self.pool = nn.MaxPool3d(2)

    def forward(self, a: torch.Tensor) -> tuple[torch.Tensor, ...]:
        f0 = self.act(self.conv0(a))
        f1 = self.act(self.conv1(self.pool(f0)))
        f2 = self.act(self.conv2(self.pool(f1)))
        f3 = self.act(self.conv3(self.pool(f2)))
        return f0, f1, f2, f3


class OccupancyHead(nn.Module):
    """Point-wise MLP on gathered multi-scale features + the coordinate."""

    def __init__(self, in_dim: int = POINT_FEATURE_DIM, width: int = 256, hidden: int = 4):
        super().__init__()
        layers: list[nn.Module] = []
        prev = in_dim
        for _ in range(hidden):
            layers += [nn.Linear(prev, width), nn.ReLU(inplace=True)]
            prev = width
        layers.append(nn.Linear(prev, 1))
        self.net = nn.Sequential(*layers)

    def forward(self, feats: torch.Tensor) -> torch.Tensor:
        return self.net(feats)


@dataclass
class MultiScaleFeatureGrids:
    """F0..F3 feature grids, resolutions 64/32/16/8, channels 32/64/128/128."""

    grids: tuple[torch.Tensor, ...]  # each (1, C, m, m, m)

    def __post_init__(self):
        if len(self.grids) != 4:
            raise ValueError("expected exactly four feature grids")
        for g, c, m in zip(self.grids, MS_CHANNELS, MS_RESOLUTIONS):
            if tuple(g.shape[1:]) != (c, m, m, m):
                raise ValueError(f"grid shape {tuple(g.shape)} != (1,{c},{m},{m},{m})")


def grid_gather_trilinear(grid: torch.Tensor, points: torch.Tensor) -> torch.Tensor:
    """Trilinear gather from a (1, C, m, m, m) grid at (n, 3) cube points.

    Cell centers follow the canonical grid layout (cell i centered at
    CUBE_MIN + (i + 0.5)/m); out-of-cube points clamp to the border.
    """
    m = grid.shape[2]
    idx = (points - CUBE_MIN) * m - 0.5
    idx = idx.clamp(0.0, m - 1.0)
    i0 = idx.floor().long().clamp(max=m - 2) if m > 1 else idx.long()
    frac = idx - i0 if m > 1 else torch.zeros_like(idx)
    i1 = (i0 + 1).clamp(max=m - 1)
    g = grid[0]  # (C, m, m, m)
    out = None
    for dx in (0, 1):
        wx = frac[:, 0] if dx else 1.0 - frac[:, 0]
        ix = i1[:, 0] if dx else i0[:, 0]
        for dy in (0, 1):
            wy = frac[:, 1] if dy else 1.0 - frac[:, 1]
            iy = i1[:, 1] if dy else i0[:, 1]
            for dz in (0, 1):
                wz = frac[:, 2] if dz else 1.0 - frac[:, 2]
                iz = i1[:, 2] if dz else i0[:, 2]
                term = g[:, ix, iy, iz].T * (wx * wy * wz).unsqueeze(1)
                out = term if out is None else out + term
    return out  # (n, C)


def _grid_list(grids) -> tuple[torch.Tensor, ...]:
    return grids.grids if isinstance(grids, MultiScaleFeatureGrids) else tuple(grids)


def point_features(grids, points: torch.Tensor) -> torch.Tensor:
    feats = [grid_gather_trilinear(g, points) for g in _grid_list(grids)]
    feats.append(points)
    return torch.cat(feats, dim=1)


def decode_logits(head: OccupancyHead, grids, points: torch.Tensor) -> torch.Tensor:
    """Raw occupancy logits; used by training losses."""
    return head(point_features(grids, points))[:, 0]


def decode_occupancy_values(head: OccupancyHead, grids, points: np.ndarray) -> np.ndarray:
    """Occupancy probabilities in [0, 1] for (n, 3) points, batch-invariant."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float32))
    n = len(pts)
    if n == 0:
        return np.zeros(0, dtype=np.float32)
    out = np.empty(n, dtype=np.float32)
    with torch.no_grad():
        for start in range(0, n, DECODE_CHUNK):
            chunk = pts[start : start + DECODE_CHUNK]
            pad = DECODE_CHUNK - len(chunk)
            if pad:
                chunk = np.concatenate([chunk, np.repeat(chunk[-1:], pad, axis=0)])
            t = torch.from_numpy(chunk)
            vals = torch.sigmoid(decode_logits(head, grids, t))
            out[start : start + DECODE_CHUNK - pad] = vals.numpy()[: DECODE_CHUNK - pad]
    return out
