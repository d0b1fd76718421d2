"""Bundle of the five learned components behind the spec'd inference ops."""

from __future__ import annotations

import numpy as np
import torch

from ..geom import Camera
from .config import TrainConfig
from .lifter import (
    FEATURE_CHANNELS,
    LiftEncoder,
    VOLUME_RES,
    lift_features,
    tensor_to_volume,
    volume_to_tensor,
)
from .translator import DepthTranslator, camera_vector
from .volumes import (
    Aggregator,
    MultiScaleEncoder,
    MultiScaleFeatureGrids,
    OccupancyHead,
    decode_occupancy_values,
)

COMPONENTS = ("translator_t", "translator_tstar", "lifter", "aggregator", "decoder")


class UntrainedComponent(RuntimeError):
    pass


class ModelBundle:
    """Holds translator t/t*, lifting encoder, aggregator, and decoder.

    Inference methods reject components that have neither been trained nor
    loaded from a checkpoint. All modules stay in eval mode between training
    phases; inference is deterministic given weights and inputs.
    """

    def __init__(self, config: TrainConfig | None = None):
        self.config = config or TrainConfig()
        torch.manual_seed(self.config.seed)
        self.translator_t = DepthTranslator(in_channels=1, ngf=self.config.ngf)
        self.translator_tstar = DepthTranslator(in_channels=2, ngf=self.config.ngf)
        self.lifter = LiftEncoder()
        self.aggregator = Aggregator()
        self.ms_encoder = MultiScaleEncoder()
        self.head = OccupancyHead()
        self.trained: set[str] = set()
        self._background_feature: np.ndarray | None = None
        self.eval()

    # -- plumbing ---------------------------------------------------------

    def modules_by_component(self) -> dict[str, list[torch.nn.Module]]:
        return {
            "translator_t": [self.translator_t],
            "translator_tstar": [self.translator_tstar],
            "lifter": [self.lifter],
            "aggregator": [self.aggregator],
            "decoder": [self.ms_encoder, self.head],
        }

    def eval(self) -> "ModelBundle":
        for mods in self.modules_by_component().values():
            for m in mods:
                m.eval()
        return self

    def require(self, *components: str) -> None:
        missing = [c for c in components if c not in self.trained]
        if missing:
            raise UntrainedComponent(f"components not trained/loaded: {missing}")

    def mark_trained(self, *components: str) -> None:
        for c in components:
            if c not in COMPONENTS:
                raise ValueError(f"unknown component {c!r}")
            self.trained.add(c)
        self._background_feature = None

    # -- depth prediction --------------------------------------------------

    def _run_translator(self, net, channels: list[np.ndarray], cam: Camera) -> np.ndarray:
        x = torch.from_numpy(np.stack(channels).astype(np.float32))[None]
        with torch.no_grad():
            d = net(x, camera_vector(cam)[None])
        return d[0, 0].numpy().astype(np.float64)

    def predict_depth_initial(self, sketch: np.ndarray, cam: Camera) -> np.ndarray:
        self.require("translator_t")
        if np.asarray(sketch).shape != cam.image_size:
            raise ValueError("sketch does not match camera image size")
        return self._run_translator(self.translator_t, [np.asarray(sketch)], cam)

    def predict_depth_refined(
        self, sketch: np.ndarray, d_ref: np.ndarray, cam: Camera
    ) -> np.ndarray:
        self.require("translator_tstar")
        s = np.asarray(sketch)
        d = np.asarray(d_ref)
        if s.shape != d.shape:
            raise ValueError(f"sketch {s.shape} and reference depth {d.shape} differ")
        return self._run_translator(self.translator_tstar, [s, d], cam)

    # -- volume ops ---------------------------------------------------------

    def encode_volume(self, x_vol: np.ndarray) -> np.ndarray:
        self.require("lifter")
        v = np.asarray(x_vol)
        if v.shape != (VOLUME_RES, VOLUME_RES, VOLUME_RES, 3):
            raise ValueError(f"expected (64,64,64,3) lifted volume, got {v.shape}")
        with torch.no_grad():
            out = self.lifter(volume_to_tensor(v))
        return tensor_to_volume(out)

    def lift_and_encode(self, sketch: np.ndarray, depth: np.ndarray, cam: Camera) -> np.ndarray:
        return self.encode_volume(lift_features(sketch, depth, cam))

    def aggregate(self, a_prev: np.ndarray, v_new: np.ndarray) -> np.ndarray:
        self.require("aggregator")
        shape = (VOLUME_RES,) * 3 + (FEATURE_CHANNELS,)
        if np.asarray(a_prev).shape != shape or np.asarray(v_new).shape != shape:
            raise ValueError(f"expected two {shape} volumes")
        with torch.no_grad():
            out = self.aggregator(volume_to_tensor(a_prev), volume_to_tensor(v_new))
        return tensor_to_volume(out)

    def build_multiscale(self, a: np.ndarray) -> MultiScaleFeatureGrids:
        self.require("decoder")
        shape = (VOLUME_RES,) * 3 + (FEATURE_CHANNELS,)
        if np.asarray(a).shape != shape:
            raise ValueError(f"expected {shape} aggregate volume, got {np.asarray(a).shape}")
        with torch.no_grad():
            grids = self.ms_encoder(volume_to_tensor(a))
        return MultiScaleFeatureGrids(grids)

    def decode_occupancy(self, grids: MultiScaleFeatureGrids, points: np.ndarray) -> np.ndarray:
        self.require("decoder")
        return decode_occupancy_values(self.head, grids, points)

    def occupancy_on_grid(self, a: np.ndarray, n: int) -> np.ndarray:
        """Decode the aggregate on an n^3 cell-center grid -> (n, n, n) floats."""
        from ..geom import cell_centers

        grids = self.build_multiscale(a)
        pts = cell_centers(n).reshape(-1, 3).astype(np.float32)
        return self.decode_occupancy(grids, pts).reshape(n, n, n)

    def background_feature(self) -> np.ndarray:
        """Encoder output for an all-background lifted cell, used as scale fill."""
        self.require("lifter")
        if self._background_feature is None:
            bg = np.zeros((VOLUME_RES,) * 3 + (3,), dtype=np.float32)
            bg[..., 1] = 1.0  # background depth
            bg[..., 2] = 0.5  # slab midpoint
            enc = self.encode_volume(bg)
            mid = VOLUME_RES // 2
            self._background_feature = enc[mid, mid, mid].copy()
        return self._background_feature
