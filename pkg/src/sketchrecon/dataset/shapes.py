"""Procedural watertight shapes for tests and desk-scale training runs.

Shapes are assembled from analytic solids (boxes, ellipsoids), voxelized,
then re-meshed with marching cubes so every generated mesh is a closed,
consistently oriented 2-manifold — the same guarantee the ingestion step
expects from externally watertighted data.
"""

from __future__ import annotations

import numpy as np

from ..geom import Mesh, cell_centers, marching_cubes, normalize_vertices

CATEGORIES = ("chair", "airplane")


def _box(pts, center, size):
    half = np.asarray(size) / 2.0
    return np.all(np.abs(pts - np.asarray(center)) <= half, axis=-1)


def _ellipsoid(pts, center, radii):
    d = (pts - np.asarray(center)) / np.asarray(radii)
    return np.sum(d * d, axis=-1) <= 1.0


def chair_occupancy(pts: np.ndarray, rng: np.random.Generator):
    seat_w = rng.uniform(0.52, 0.78)
    seat_d = rng.uniform(0.48, 0.68)
    seat_t = rng.uniform(0.06, 0.11)
    seat_y = rng.uniform(-0.12, 0.02)
    leg_w = rng.uniform(0.08, 0.13)
    back_t = rng.uniform(0.06, 0.1)
    floor_y = -0.44
    # keep the backrest inside the sampling cube
    back_h = min(rng.uniform(0.3, 0.46), 0.42 - seat_y - seat_t)

    occ = _box(pts, (0.0, seat_y, 0.0), (seat_w, seat_t, seat_d))
    # legs at the seat corners, overlapping the seat slab
    lx = seat_w / 2 - leg_w / 2
    lz = seat_d / 2 - leg_w / 2
    leg_h = seat_y - floor_y
    for sx in (-1, 1):
        for sz in (-1, 1):
            occ |= _box(
                pts,
                (sx * lx, (seat_y + floor_y) / 2, sz * lz),
                (leg_w, leg_h + seat_t, leg_w),
            )
    # backrest panel at the rear edge
    occ |= _box(
        pts,
        (0.0, seat_y + back_h / 2, -(seat_d / 2 - back_t / 2)),
        (seat_w, back_h + seat_t, back_t),
    )
    if rng.random() < 0.35:
        # armrests
        arm_h = rng.uniform(0.12, 0.2)
        arm_t = rng.uniform(0.05, 0.08)
        for sx in (-1, 1):
            occ |= _box(
                pts,
                (sx * (seat_w / 2 - arm_t / 2), seat_y + arm_h / 2, 0.0),
                (arm_t, arm_h + seat_t, seat_d * 0.9),
            )
    return occ


def airplane_occupancy(pts: np.ndarray, rng: np.random.Generator):
    fus_l = rng.uniform(0.36, 0.46)
    fus_r = rng.uniform(0.06, 0.1)
    wing_span = rng.uniform(0.7, 0.9)
    wing_chord = rng.uniform(0.16, 0.26)
    wing_t = rng.uniform(0.03, 0.05)
    wing_z = rng.uniform(-0.05, 0.1)

    occ = _ellipsoid(pts, (0.0, 0.0, 0.0), (fus_r, fus_r, fus_l))
    occ |= _box(pts, (0.0, 0.0, wing_z), (wing_span, wing_t, wing_chord))
    # horizontal stabilizer + vertical fin at the tail
    occ |= _box(pts, (0.0, 0.0, -fus_l * 0.88), (wing_span * 0.4, wing_t, wing_chord * 0.6))
    occ |= _box(
        pts,
        (0.0, fus_r + 0.05, -fus_l * 0.9),
        (wing_t, rng.uniform(0.1, 0.16), wing_chord * 0.6),
    )
    return occ


_OCCUPANCY_FNS = {"chair": chair_occupancy, "airplane": airplane_occupancy}


def synth_mesh(category: str, seed: int, resolution: int = 96) -> Mesh:
    """Generate one normalized watertight mesh of the given category."""
    if category not in _OCCUPANCY_FNS:
        raise ValueError(f"unknown category {category!r}")
    rng = np.random.default_rng(seed)
    pts = cell_centers(resolution)
    field = _OCCUPANCY_FNS[category](pts, rng).astype(np.float64)
    # empty outer shell: marching cubes then produces a closed surface even
    # if a sampled solid grazes the cube boundary
    field[[0, -1], :, :] = 0.0
    field[:, [0, -1], :] = 0.0
    field[:, :, [0, -1]] = 0.0
    mesh = marching_cubes(field, 0.5)
    mesh.vertices = normalize_vertices(mesh.vertices)
    return mesh


def synth_bank(category: str, count: int, seed: int = 0, resolution: int = 96) -> list[Mesh]:
    return [synth_mesh(category, seed * 10007 + i, resolution) for i in range(count)]
