"""Dataset synthesis and the on-disk layout.

Layout under a dataset root:

    <root>/manifest.json
    <root>/<category>/<shape_id>/mesh.obj
    <root>/<category>/<shape_id>/views/<az>_<el>/sketch.png      1-bit PNG
    <root>/<category>/<shape_id>/views/<az>_<el>/depth.npy       float32 raster
    <root>/<category>/<shape_id>/views/<az>_<el>/back_depth.npy  float32 raster
    <root>/<category>/<shape_id>/occupancy.bin
    <root>/<category>/shadows/<az>_<el>.npy

occupancy.bin is magic 'OCC1' + uint32 count + float32 (n,3) points +
uint8 (n,) labels, little-endian. Rasters are row-major, origin top-left.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..geom import Camera, Mesh, load_obj, save_obj
from .occupancy import OccupancyBatch, sample_occupancy_points
from .render import render_depth_pair
from .sketch import compute_shadow_guide, synthesize_sketch

_OCC_MAGIC = b"OCC1"


@dataclass
class ShapeRecord:
    """One normalized watertight shape in a named category."""

    id: str
    category: str
    mesh: Mesh
    split: str = "train"


@dataclass
class ViewSample:
    camera: Camera
    sketch: np.ndarray
    depth: np.ndarray
    back_depth: np.ndarray


def view_key(cam: Camera) -> str:
    return f"{cam.azimuth:g}_{cam.elevation:g}"


def save_sketch_png(sketch: np.ndarray, path: Path) -> None:
    Image.fromarray(np.asarray(sketch) > 0.5).save(path, bits=1)


def load_sketch_png(path) -> np.ndarray:
    return (np.asarray(Image.open(path)) > 0).astype(np.float32)


def save_occupancy(batch: OccupancyBatch, path: Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_OCC_MAGIC)
        fh.write(struct.pack("<I", len(batch)))
        fh.write(batch.points.astype("<f4").tobytes())
        fh.write(batch.labels.astype(np.uint8).tobytes())


def load_occupancy(path) -> OccupancyBatch:
    with open(path, "rb") as fh:
        if fh.read(4) != _OCC_MAGIC:
            raise ValueError(f"{path}: not an occupancy file")
        (n,) = struct.unpack("<I", fh.read(4))
        pts = np.frombuffer(fh.read(n * 12), dtype="<f4").reshape(n, 3)
        labels = np.frombuffer(fh.read(n), dtype=np.uint8)
    return OccupancyBatch(pts.copy(), labels.copy())


def build_dataset(
    root,
    records: list[ShapeRecord],
    cameras: list[Camera],
    n_uniform: int = 1024,
    n_near_surface: int = 1024,
    noise_sigma: float = 0.01,
    seed: int = 0,
    progress=None,
) -> dict:
    """Render all (shape, view) samples and write the layout + manifest."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    categories: dict[str, dict] = {}
    shadow_acc: dict[tuple[str, str], list[np.ndarray]] = {}

    for ri, rec in enumerate(records):
        if not rec.mesh.is_watertight():
            raise ValueError(f"shape {rec.id} is not watertight")
        shape_dir = root / rec.category / rec.id
        shape_dir.mkdir(parents=True, exist_ok=True)
        save_obj(rec.mesh, shape_dir / "mesh.obj")
        for cam in cameras:
            vdir = shape_dir / "views" / view_key(cam)
            vdir.mkdir(parents=True, exist_ok=True)
            front, back = render_depth_pair(rec.mesh, cam)
            sketch = synthesize_sketch(front)
            np.save(vdir / "depth.npy", front.astype(np.float32))
            np.save(vdir / "back_depth.npy", back.astype(np.float32))
            save_sketch_png(sketch, vdir / "sketch.png")
            if rec.split == "train":
                shadow_acc.setdefault((rec.category, view_key(cam)), []).append(sketch)
        batch = sample_occupancy_points(
            rec.mesh, n_uniform, n_near_surface, noise_sigma, seed=seed + ri
        )
        save_occupancy(batch, shape_dir / "occupancy.bin")
        cat = categories.setdefault(rec.category, {"shapes": {}})
        cat["shapes"][rec.id] = {"split": rec.split}
        if progress:
            progress(ri + 1, len(records))

    for (category, key), sketches in shadow_acc.items():
        sdir = root / category / "shadows"
        sdir.mkdir(parents=True, exist_ok=True)
        np.save(sdir / f"{key}.npy", compute_shadow_guide(sketches).astype(np.float32))

    h, w = cameras[0].image_size if cameras else (256, 256)
    manifest = {
        "image_size": [h, w],
        "seed": seed,
        "n_uniform": n_uniform,
        "n_near_surface": n_near_surface,
        "noise_sigma": noise_sigma,
        "cameras": [{"azimuth_deg": c.azimuth, "elevation_deg": c.elevation} for c in cameras],
        "categories": categories,
    }
    with open(root / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
    return manifest


class DatasetView:
    """Read access to a generated dataset root."""

    def __init__(self, root):
        self.root = Path(root)
        with open(self.root / "manifest.json") as fh:
            self.manifest = json.load(fh)
        h, w = self.manifest["image_size"]
        self.cameras = [
            Camera(c["azimuth_deg"], c["elevation_deg"], (h, w))
            for c in self.manifest["cameras"]
        ]

    def categories(self) -> list[str]:
        return sorted(self.manifest["categories"])

    def shape_ids(self, category: str, split: str | None = None) -> list[str]:
        shapes = self.manifest["categories"][category]["shapes"]
        return sorted(
            sid for sid, meta in shapes.items() if split is None or meta["split"] == split
        )

    def mesh(self, category: str, shape_id: str) -> Mesh:
        return load_obj(self.root / category / shape_id / "mesh.obj")

    def view(self, category: str, shape_id: str, cam: Camera) -> ViewSample:
        vdir = self.root / category / shape_id / "views" / view_key(cam)
        return ViewSample(
            camera=cam,
            sketch=load_sketch_png(vdir / "sketch.png"),
            depth=np.load(vdir / "depth.npy").astype(np.float64),
            back_depth=np.load(vdir / "back_depth.npy").astype(np.float64),
        )

    def occupancy(self, category: str, shape_id: str) -> OccupancyBatch:
        return load_occupancy(self.root / category / shape_id / "occupancy.bin")

    def shadow_guide(self, category: str, cam: Camera) -> np.ndarray:
        if category not in self.manifest["categories"]:
            raise KeyError(f"unknown category {category!r}")
        path = self.root / category / "shadows" / f"{view_key(cam)}.npy"
        if not path.exists():
            raise KeyError(f"no shadow guide for view {view_key(cam)}")
        return np.load(path).astype(np.float64)
