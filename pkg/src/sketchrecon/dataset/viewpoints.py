"""Training viewpoint grid."""

from __future__ import annotations

from ..geom import Camera

AZIMUTHS = tuple(float(a) for a in range(0, 360, 15))
ELEVATIONS = (-15.0, 0.0, 15.0, 30.0, 45.0)


def sample_viewpoints(image_size=(256, 256)) -> list[Camera]:
    """All 120 training cameras: 24 azimuths x 5 elevations, 15 deg steps."""
    return [
        Camera(az, el, image_size)
        for az in AZIMUTHS
        for el in ELEVATIONS
    ]
