"""Sketch-to-depth translators and depth-derived normals.

Two translators share one architecture: the first-view model maps a sketch
to depth; the refinement model additionally consumes a depth rendered from
the current reconstruction as an extra input channel. Both are view-aware:
the camera's (azimuth, elevation) in radians is broadcast-concatenated at
the encoder-decoder bottleneck.
"""

from __future__ import annotations

import math

import numpy as np
import torch
import torch.nn as nn


def _down(cin, cout, norm=True):
    layers = [nn.Conv2d(cin, cout, 4, 2, 1)]
    if norm:
        layers.append(nn.InstanceNorm2d(cout))
    layers.append(nn.LeakyReLU(0.2, inplace=True))
    return nn.Sequential(*layers)


def _up(cin, cout, norm=True):
    layers = [nn.ConvTranspose2d(cin, cout, 4, 2, 1)]
    if norm:
        layers.append(nn.InstanceNorm2d(cout))
    layers.append(nn.ReLU(inplace=True))
    return nn.Sequential(*layers)


class DepthTranslator(nn.Module):
    """8-down/8-up encoder-decoder with skips; 256x256 in/out, sigmoid depth."""

    def __init__(self, in_channels: int = 1, ngf: int = 64):
        super().__init__()
        c = [ngf, ngf * 2, ngf * 4, ngf * 8, ngf * 8, ngf * 8, ngf * 8, ngf * 8]
        self.downs = nn.ModuleList()
        prev = in_channels
        for i, ch in enumerate(c):
            # no norm on the outermost layer or the 1x1 bottleneck
            self.downs.append(_down(prev, ch, norm=0 < i < 7))
            prev = ch
        self.ups = nn.ModuleList()
        up_in = c[7] + 2  # camera vector joins the bottleneck
        for i in range(7, 0, -1):
            self.ups.append(_up(up_in, c[i - 1]))
            up_in = c[i - 1] * 2  # skip connection concat
        self.final = nn.ConvTranspose2d(up_in, 1, 4, 2, 1)

    def forward(self, x: torch.Tensor, cam_vec: torch.Tensor) -> torch.Tensor:
        skips = []
        h = x
        for down in self.downs:
            h = down(h)
            skips.append(h)
        cond = cam_vec.view(-1, 2, 1, 1).expand(h.shape[0], 2, h.shape[2], h.shape[3])
        h = torch.cat([h, cond], dim=1)
        for i, up in enumerate(self.ups):
            h = up(h)
            h = torch.cat([h, skips[6 - i]], dim=1)
        return torch.sigmoid(self.final(h))


class PatchDiscriminator(nn.Module):
    """Patch real/fake classifier over (condition, depth) channel stacks."""

    def __init__(self, in_channels: int, ndf: int = 32):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(in_channels, ndf, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(ndf, ndf * 2, 4, 2, 1),
            nn.InstanceNorm2d(ndf * 2),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(ndf * 2, ndf * 4, 4, 2, 1),
            nn.InstanceNorm2d(ndf * 4),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(ndf * 4, 1, 4, 1, 1),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)


def camera_vector(cam) -> torch.Tensor:
    """(azimuth, elevation) in radians as the conditioning vector."""
    return torch.tensor(
        [math.radians(cam.azimuth), math.radians(cam.elevation)], dtype=torch.float32
    )


def normal_map_torch(depth: torch.Tensor, mask_background: bool = True) -> torch.Tensor:
    """Unit normals from central differences of a (B, 1, H, W) depth map.

    The slab depth range and the image width cover the same world extent, so
    gradients are scaled by W (resp. H) to get world-consistent slopes. The
    normal convention is (x right, y down, z toward the viewer); a flat or
    background pixel maps to (0, 0, 1).
    """
    b, _, h, w = depth.shape
    z = depth[:, 0]
    dzdx = torch.cat(
        [
            (z[:, :, 1:2] - z[:, :, 0:1]),
            (z[:, :, 2:] - z[:, :, :-2]) / 2.0,
            (z[:, :, -1:] - z[:, :, -2:-1]),
        ],
        dim=2,
    )
    dzdy = torch.cat(
        [
            (z[:, 1:2, :] - z[:, 0:1, :]),
            (z[:, 2:, :] - z[:, :-2, :]) / 2.0,
            (z[:, -1:, :] - z[:, -2:-1, :]),
        ],
        dim=1,
    )
    n = torch.stack(
        [-dzdx * w, -dzdy * h, torch.ones_like(z)],
        dim=1,
    )
    n = n / torch.linalg.vector_norm(n, dim=1, keepdim=True).clamp_min(1e-12)
    if mask_background:
        bg = (z >= 1.0 - 1e-6).unsqueeze(1)
        flat = torch.zeros_like(n)
        flat[:, 2] = 1.0
        n = torch.where(bg, flat, n)
    return n


def normal_from_depth(depth: np.ndarray) -> np.ndarray:
    """Numpy wrapper: (H, W) depth -> (H, W, 3) unit normals."""
    t = torch.from_numpy(np.asarray(depth, dtype=np.float32))[None, None]
    with torch.no_grad():
        n = normal_map_torch(t)
    return n[0].permute(1, 2, 0).numpy()
