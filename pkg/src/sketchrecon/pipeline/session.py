"""The iterative modeling state machine.

A session carries the running aggregate feature volume and the current mesh.
`generate` seeds the aggregate with the first view's encoded volume (exact
bypass, no aggregation call), `refine` fuses later views through the learned
recursion, `edit_masked` applies the replace-aggregate-replace update inside
a swept 3D mask, and `scale_shape` resamples the aggregate about the cube
center. Every mutating operation appends a self-contained history record so
a session can be replayed bitwise from its log.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field

import numpy as np

from ..dataset import render_depth_pair, synthesize_sketch
from ..geom import Camera, Mesh, cell_centers, marching_cubes, sample_volume_trilinear
from ..nets import ModelBundle
from ..pngio import decode_binary_png, encode_binary_png
from .editmask import build_edit_masks

DEFAULT_SIGMA = 0.5
DEFAULT_DILATION_KERNEL = 5
DEFAULT_MC_RESOLUTION = 128


class SessionStateError(RuntimeError):
    """Operation not valid for the session's current step."""


@dataclass
class SessionConfig:
    sigma: float = DEFAULT_SIGMA
    dilation_kernel: int = DEFAULT_DILATION_KERNEL
    mc_resolution: int = DEFAULT_MC_RESOLUTION

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "dilation_kernel": self.dilation_kernel,
            "mc_resolution": self.mc_resolution,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SessionConfig":
        return cls(**obj)


@dataclass
class SessionState:
    session_id: str
    category: str
    view_index: int = 0
    aggregate: np.ndarray | None = None
    mesh: Mesh | None = None
    history: list[dict] = field(default_factory=list)
    config: SessionConfig = field(default_factory=SessionConfig)

    def require_started(self) -> None:
        if self.view_index < 1 or self.aggregate is None:
            raise SessionStateError("session has no shape yet; call generate first")


def _record(op: str, cam: Camera | None = None, **extra) -> dict:
    rec: dict = {"op": op}
    if cam is not None:
        rec["camera"] = cam.to_json()
    rec.update(extra)
    return rec


class Engine:
    """Runs sessions against one immutable set of model weights."""

    def __init__(self, bundle: ModelBundle, categories=("chair", "airplane")):
        self.bundle = bundle
        self.categories = tuple(categories)

    # -- session lifecycle ------------------------------------------------

    def session_init(
        self, category: str, session_id: str | None = None, config: SessionConfig | None = None
    ) -> SessionState:
        if category not in self.categories:
            raise ValueError(f"unknown category {category!r}; known: {self.categories}")
        return SessionState(
            session_id=session_id or uuid.uuid4().hex,
            category=category,
            config=config or SessionConfig(),
        )

    # -- mesh extraction ---------------------------------------------------

    def extract_mesh_from(self, aggregate: np.ndarray, config: SessionConfig) -> Mesh:
        field_values = self.bundle.occupancy_on_grid(aggregate, config.mc_resolution)
        return marching_cubes(field_values, config.sigma)

    def extract_mesh(self, session: SessionState) -> Mesh:
        session.require_started()
        return self.extract_mesh_from(session.aggregate, session.config)

    # -- modeling operations ------------------------------------------------

    def generate(self, session: SessionState, sketch: np.ndarray, cam: Camera) -> Mesh:
        if session.view_index != 0:
            raise SessionStateError("generate is only valid on a fresh session; use refine")
        depth = self.bundle.predict_depth_initial(sketch, cam)
        volume = self.bundle.lift_and_encode(sketch, depth, cam)
        session.aggregate = volume  # first view bypasses aggregation
        session.mesh = self.extract_mesh_from(volume, session.config)
        session.view_index = 1
        session.history.append(
            _record("generate", cam, sketch_png=encode_binary_png(sketch).hex())
        )
        return session.mesh

    def refine(self, session: SessionState, sketch: np.ndarray, cam: Camera) -> Mesh:
        session.require_started()
        record = _record("refine", cam, sketch_png=encode_binary_png(sketch).hex())
        repeat = next(
            (
                i
                for i, rec in enumerate(session.history)
                if rec["op"] == "refine" and rec.get("camera") == record["camera"]
            ),
            None,
        )
        if repeat is not None:
            # resubmitting from the same viewpoint revises that view instead
            # of stacking a duplicate; state is rebuilt from the updated log
            # so the history stays bitwise-replayable
            session.history[repeat] = record
            rebuilt = self.replay(session.category, session.history, session.config)
            session.aggregate = rebuilt.aggregate
            session.mesh = rebuilt.mesh
            session.view_index = rebuilt.view_index
            return session.mesh
        d_ref = render_depth_pair(session.mesh, cam)[0]
        depth = self.bundle.predict_depth_refined(sketch, d_ref, cam)
        volume = self.bundle.lift_and_encode(sketch, depth, cam)
        session.aggregate = self.bundle.aggregate(session.aggregate, volume)
        session.mesh = self.extract_mesh_from(session.aggregate, session.config)
        session.view_index += 1
        session.history.append(record)
        return session.mesh

    def edit_masked(
        self, session: SessionState, sketch: np.ndarray, mask2d: np.ndarray, cam: Camera
    ) -> Mesh:
        session.require_started()
        d_front, d_back = render_depth_pair(session.mesh, cam)
        depth = self.bundle.predict_depth_refined(sketch, d_front, cam)
        volume = self.bundle.lift_and_encode(sketch, depth, cam)
        masks = build_edit_masks(
            mask2d, depth, d_front, d_back, cam, session.config.dilation_kernel
        )
        m = masks.dilated[..., None]
        prev = session.aggregate
        replaced = np.where(m, volume, prev)
        smoothed = self.bundle.aggregate(replaced, volume)
        # second replacement: everything outside the dilated mask stays
        # bit-identical to the previous aggregate
        session.aggregate = np.where(m, smoothed, prev)
        session.mesh = self.extract_mesh_from(session.aggregate, session.config)
        session.view_index += 1
        session.history.append(
            _record(
                "edit",
                cam,
                sketch_png=encode_binary_png(sketch).hex(),
                mask_png=encode_binary_png(mask2d).hex(),
            )
        )
        return session.mesh

    def scale_shape(self, session: SessionState, factor: float) -> Mesh:
        session.require_started()
        factor = float(factor)
        if not (0.5 <= factor <= 2.0):
            raise ValueError(f"scale factor {factor} outside [0.5, 2.0]")
        if factor != 1.0:
            n = session.aggregate.shape[0]
            src = cell_centers(n).reshape(-1, 3) / factor
            resampled = sample_volume_trilinear(session.aggregate, src)
            outside = np.any(np.abs(src) > 0.5, axis=1)
            resampled[outside] = self.bundle.background_feature()
            session.aggregate = resampled.reshape(session.aggregate.shape).astype(np.float32)
        session.mesh = self.extract_mesh_from(session.aggregate, session.config)
        session.history.append(_record("scale", factor=factor))
        return session.mesh

    def render_reference_sketch(self, session: SessionState, cam: Camera) -> np.ndarray:
        session.require_started()
        return synthesize_sketch(render_depth_pair(session.mesh, cam)[0])

    # -- replay -------------------------------------------------------------

    def apply_record(self, session: SessionState, record: dict) -> Mesh:
        op = record["op"]
        cam = Camera.from_json(record["camera"]) if "camera" in record else None
        if op == "generate":
            return self.generate(session, decode_binary_png(bytes.fromhex(record["sketch_png"])), cam)
        if op == "refine":
            return self.refine(session, decode_binary_png(bytes.fromhex(record["sketch_png"])), cam)
        if op == "edit":
            return self.edit_masked(
                session,
                decode_binary_png(bytes.fromhex(record["sketch_png"])),
                decode_binary_png(bytes.fromhex(record["mask_png"])),
                cam,
            )
        if op == "scale":
            return self.scale_shape(session, record["factor"])
        raise ValueError(f"unknown operation {op!r}")

    def replay(
        self, category: str, history: list[dict], config: SessionConfig | None = None
    ) -> SessionState:
        session = self.session_init(category, config=config)
        for record in history:
            self.apply_record(session, record)
        return session
