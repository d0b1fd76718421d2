"""Training-data synthesis: viewpoints, depth rendering, sketches, occupancy."""

from .generate import (
    DatasetView,
    ShapeRecord,
    ViewSample,
    build_dataset,
    load_occupancy,
    load_sketch_png,
    save_occupancy,
    save_sketch_png,
    view_key,
)
from .occupancy import (
    OccupancyBatch,
    TriangleColumns,
    contains_points,
    sample_occupancy_points,
    voxelize_mesh,
)
from .render import render_back_depth, render_depth, render_depth_pair
from .shapes import CATEGORIES, synth_bank, synth_mesh
from .sketch import compute_shadow_guide, synthesize_sketch
from .viewpoints import AZIMUTHS, ELEVATIONS, sample_viewpoints

__all__ = [
    "DatasetView",
    "ShapeRecord",
    "ViewSample",
    "build_dataset",
    "load_occupancy",
    "load_sketch_png",
    "save_occupancy",
    "save_sketch_png",
    "view_key",
    "OccupancyBatch",
    "TriangleColumns",
    "contains_points",
    "sample_occupancy_points",
    "voxelize_mesh",
    "render_back_depth",
    "render_depth",
    "render_depth_pair",
    "CATEGORIES",
    "synth_bank",
    "synth_mesh",
    "compute_shadow_guide",
    "synthesize_sketch",
    "AZIMUTHS",
    "ELEVATIONS",
    "sample_viewpoints",
]
