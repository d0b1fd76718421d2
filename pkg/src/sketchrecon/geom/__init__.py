"""Deterministic geometry kernel: cameras, grids, sampling, marching cubes."""

from .camera import Camera, SPHERE_RADIUS, project_point, project_points
from .grid import (
    CUBE_MIN,
    CUBE_MAX,
    PAD_FRACTION,
    CanonicalCube,
    VoxelGrid,
    axis_coords,
    cell_centers,
    dilate_mask,
    sample_volume_trilinear,
)
from .mesh import (
    Mesh,
    load_obj,
    marching_cubes,
    normalize_vertices,
    obj_text,
    sample_surface,
    save_obj,
)
from .raster import sample_image_bilinear

__all__ = [
    "Camera",
    "SPHERE_RADIUS",
    "project_point",
    "project_points",
    "CUBE_MIN",
    "CUBE_MAX",
    "PAD_FRACTION",
    "CanonicalCube",
    "VoxelGrid",
    "axis_coords",
    "cell_centers",
    "dilate_mask",
    "sample_volume_trilinear",
    "Mesh",
    "load_obj",
    "marching_cubes",
    "normalize_vertices",
    "obj_text",
    "sample_surface",
    "save_obj",
    "sample_image_bilinear",
]
