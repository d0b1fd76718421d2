"""Session-oriented HTTP API.

JSON envelopes carry base64 PNG rasters (256x256, 1-bit) and cameras as
{azimuth_deg, elevation_deg}. Binary assets (mesh OBJ, reference/shadow
PNGs) are fetched by URI. Elevation is unrestricted here; only the studio
canvas clamps it.
"""

from __future__ import annotations

import base64
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from ..dataset import DatasetView
from ..geom import Camera, obj_text, sample_surface
from ..pipeline import Engine, SessionConfig, SessionStateError
from ..pngio import decode_binary_png, encode_binary_png, encode_gray_png
from .store import SessionStore

RASTER_SIZE = (256, 256)
PREVIEW_POINTS = 1024


class CameraParams(BaseModel):
    azimuth_deg: float
    elevation_deg: float

    def to_camera(self) -> Camera:
        return Camera(self.azimuth_deg, self.elevation_deg, RASTER_SIZE)


class CreateSessionRequest(BaseModel):
    category: str


class ViewRequest(BaseModel):
    sketch_png: str
    camera: CameraParams
    mode: str = Field(pattern="^(generate|refine)$")


class EditRequest(BaseModel):
    sketch_png: str
    mask_png: str
    camera: CameraParams


class ScaleRequest(BaseModel):
    factor: float


def _decode_raster(b64: str, name: str) -> np.ndarray:
    try:
        raster = decode_binary_png(base64.b64decode(b64))
    except Exception:
        raise HTTPException(status_code=422, detail=f"{name}: not a decodable PNG")
    if raster.shape != RASTER_SIZE:
        raise HTTPException(
            status_code=422,
            detail=f"{name}: expected {RASTER_SIZE} raster, got {raster.shape}",
        )
    return raster


def _points_preview(mesh, n=PREVIEW_POINTS) -> list[list[float]]:
    if mesh.is_empty():
        return []
    pts, _ = sample_surface(mesh, n, np.random.default_rng(0))
    colors = np.clip(pts + 0.5, 0.0, 1.0)  # position-coded coloring
    return np.concatenate([pts, colors], axis=1).round(5).tolist()


def create_app(
    engine: Engine,
    sessions_dir,
    dataset_root=None,
    session_config: SessionConfig | None = None,
) -> FastAPI:
    app = FastAPI(title="sketchrecon")
    store = SessionStore(engine, sessions_dir, session_config)
    dataset = DatasetView(dataset_root) if dataset_root else None
    app.state.store = store

    def get_record(session_id: str):
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            record = store.create(req.category)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "session_id": record.session.session_id,
            "shadow_guide_uri": f"/categories/{req.category}/shadow",
        }

    @app.post("/sessions/{session_id}/view")
    def post_view(session_id: str, req: ViewRequest):
        record = get_record(session_id)
        sketch = _decode_raster(req.sketch_png, "sketch_png")
        cam = req.camera.to_camera()

        def run(engine, session):
            if req.mode == "generate":
                return engine.generate(session, sketch, cam)
            return engine.refine(session, sketch, cam)

        try:
            mesh = store.mutate(session_id, run)
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "mesh_uri": f"/sessions/{session_id}/mesh?rev={record.session.view_index}",
            "points_preview": _points_preview(mesh),
        }

    @app.post("/sessions/{session_id}/edit")
    def post_edit(session_id: str, req: EditRequest):
        record = get_record(session_id)
        sketch = _decode_raster(req.sketch_png, "sketch_png")
        mask = _decode_raster(req.mask_png, "mask_png")
        cam = req.camera.to_camera()
        try:
            mesh = store.mutate(
                session_id, lambda engine, session: engine.edit_masked(session, sketch, mask, cam)
            )
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "mesh_uri": f"/sessions/{session_id}/mesh?rev={record.session.view_index}",
            "points_preview": _points_preview(mesh),
        }

    @app.post("/sessions/{session_id}/scale")
    def post_scale(session_id: str, req: ScaleRequest):
        record = get_record(session_id)
        try:
            mesh = store.mutate(
                session_id, lambda engine, session: engine.scale_shape(session, req.factor)
            )
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "mesh_uri": f"/sessions/{session_id}/mesh?rev={len(record.session.history)}",
            "points_preview": _points_preview(mesh),
        }

    @app.get("/sessions/{session_id}/reference")
    def get_reference(session_id: str, azimuth_deg: float, elevation_deg: float):
        record = get_record(session_id)
        cam = Camera(azimuth_deg, elevation_deg, RASTER_SIZE)
        try:
            with record.lock:
                sketch = store.engine.render_reference_sketch(record.session, cam)
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return Response(content=encode_binary_png(sketch), media_type="image/png")

    @app.get("/sessions/{session_id}/mesh")
    def get_mesh(session_id: str, rev: int | None = None):
        record = get_record(session_id)
        if record.session.mesh is None:
            raise HTTPException(status_code=409, detail="session has no mesh yet")
        return Response(content=obj_text(record.session.mesh), media_type="text/plain")

    @app.get("/categories/{category}/shadow")
    def get_shadow(category: str, azimuth_deg: float = 45.0, elevation_deg: float = 15.0):
        if category not in engine.categories:
            raise HTTPException(status_code=400, detail=f"unknown category {category!r}")
        guide = np.zeros(RASTER_SIZE, dtype=np.float64)
        if dataset is not None:
            # snap to the nearest generated shadow bucket
            best = None
            for cam in dataset.cameras:
                d = min(
                    abs(cam.azimuth - azimuth_deg % 360),
                    360 - abs(cam.azimuth - azimuth_deg % 360),
                ) + abs(cam.elevation - elevation_deg)
                if best is None or d < best[0]:
                    best = (d, cam)
            if best is not None:
                try:
                    guide = dataset.shadow_guide(category, best[1])
                except KeyError:
                    pass
        return Response(content=encode_gray_png(guide), media_type="image/png")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "categories": list(engine.categories)}

    return app
