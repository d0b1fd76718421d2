"""Triangle meshes: container, OBJ round-trip, marching cubes, sampling."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from skimage import measure

from .grid import CUBE_MIN, PAD_FRACTION


@dataclass
class Mesh:
    """Triangle mesh in canonical-cube units."""

    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    faces: np.ndarray = field(default_factory=lambda: np.zeros((0, 3), dtype=np.int64))

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face indices out of range")

    def is_empty(self) -> bool:
        return len(self.faces) == 0

    def is_closed(self) -> bool:
        """Every undirected edge shared by exactly two faces."""
        if self.is_empty():
            return False
        edges = np.concatenate(
            [self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]]
        )
        edges = np.sort(edges, axis=1)
        _, counts = np.unique(edges, axis=0, return_counts=True)
        return bool(np.all(counts == 2))

    def is_watertight(self) -> bool:
        """Closed and consistently oriented (each directed edge used once)."""
        if not self.is_closed():
            return False
        directed = np.concatenate(
            [self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]]
        )
        _, counts = np.unique(directed, axis=0, return_counts=True)
        return bool(np.all(counts == 1))

    def face_normals(self) -> np.ndarray:
        v = self.vertices
        f = self.faces
        n = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
        norm = np.linalg.norm(n, axis=1, keepdims=True)
        return n / np.maximum(norm, 1e-20)

    def face_areas(self) -> np.ndarray:
        v = self.vertices
        f = self.faces
        n = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
        return 0.5 * np.linalg.norm(n, axis=1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def marching_cubes(field_values: np.ndarray, sigma: float = 0.5) -> Mesh:
    """Extract the sigma level set of an N^3 scalar grid as a mesh.

    field_values[i, j, k] is the value at the cell center; output vertices
    are mapped to canonical-cube coordinates. A field entirely on one side
    of sigma yields an empty mesh.
    """
    vol = np.asarray(field_values, dtype=np.float64)
    if vol.ndim != 3:
        raise ValueError(f"expected a 3D scalar grid, got shape {vol.shape}")
    if not np.all(np.isfinite(vol)):
        raise ValueError("field contains non-finite values")
    lo, hi = float(vol.min()), float(vol.max())
    if not (lo < sigma < hi):
        return Mesh()
    n = vol.shape[0]
    verts, faces, _, _ = measure.marching_cubes(vol, level=sigma)
    world = CUBE_MIN + (verts + 0.5) / n
    return Mesh(world, faces.astype(np.int64))


def normalize_vertices(vertices: np.ndarray, pad_fraction: float = PAD_FRACTION) -> np.ndarray:
    """Center the bbox and scale the longest side to 1 - 2*pad_fraction."""
    v = np.asarray(vertices, dtype=np.float64)
    lo = v.min(axis=0)
    hi = v.max(axis=0)
    center = 0.5 * (lo + hi)
    longest = float((hi - lo).max())
    if longest <= 0:
        raise ValueError("degenerate vertex set")
    scale = (1.0 - 2.0 * pad_fraction) / longest
    return (v - center) * scale


def sample_surface(mesh: Mesh, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Area-uniform surface samples. Returns (points (n,3), unit normals (n,3))."""
    if mesh.is_empty():
        raise ValueError("cannot sample an empty mesh")
    areas = mesh.face_areas()
    total = areas.sum()
    if total <= 0:
        raise ValueError("mesh has zero surface area")
    face_idx = rng.choice(len(areas), size=n, p=areas / total)
    u = rng.random(n)
    v = rng.random(n)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    tri = mesh.vertices[mesh.faces[face_idx]]
    pts = tri[:, 0] + u[:, None] * (tri[:, 1] - tri[:, 0]) + v[:, None] * (tri[:, 2] - tri[:, 0])
    normals = mesh.face_normals()[face_idx]
    return pts, normals


def save_obj(mesh: Mesh, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(obj_text(mesh))


def obj_text(mesh: Mesh) -> str:
    """OBJ text with v/f records and 1-based indices; fixed float format."""
    buf = io.StringIO()
    for v in mesh.vertices:
        buf.write(f"v {v[0]:.8f} {v[1]:.8f} {v[2]:.8f}\n")
    for f in mesh.faces:
        buf.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")
    return buf.getvalue()


def load_obj(source) -> Mesh:
    """Parse v/f records (1-based indices; extra face fields tolerated)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="ascii") as fh:
            text = fh.read()
    verts: list[list[float]] = []
    faces: list[list[int]] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
            for i in range(1, len(idx) - 1):
                faces.append([idx[0], idx[i], idx[i + 1]])
    if not verts:
        return Mesh()
    return Mesh(np.asarray(verts), np.asarray(faces, dtype=np.int64))
