"""Learned components: translators, lifting encoder, aggregator, decoder."""

from .checkpoint import load_checkpoint, save_checkpoint
from .config import TrainConfig
from .lifter import (
    FEATURE_CHANNELS,
    LiftEncoder,
    VOLUME_RES,
    camera_projection_lut,
    lift_features,
    tensor_to_volume,
    volume_to_tensor,
)
from .model import COMPONENTS, ModelBundle, UntrainedComponent
from .train import (
    TrainingData,
    degrade_depth,
    train_aggregation,
    train_occupancy,
    train_single_view,
    train_translators,
)
from .translator import (
    DepthTranslator,
    PatchDiscriminator,
    camera_vector,
    normal_from_depth,
    normal_map_torch,
)
from .volumes import (
    Aggregator,
    DECODE_CHUNK,
    MS_CHANNELS,
    MS_RESOLUTIONS,
    MultiScaleEncoder,
    MultiScaleFeatureGrids,
    OccupancyHead,
    POINT_FEATURE_DIM,
    decode_logits,
    decode_occupancy_values,
    grid_gather_trilinear,
    point_features,
)

__all__ = [
    "load_checkpoint",
    "save_checkpoint",
    "TrainConfig",
    "FEATURE_CHANNELS",
    "LiftEncoder",
    "VOLUME_RES",
    "camera_projection_lut",
    "lift_features",
    "tensor_to_volume",
    "volume_to_tensor",
    "COMPONENTS",
    "ModelBundle",
    "UntrainedComponent",
    "TrainingData",
    "degrade_depth",
    "train_aggregation",
    "train_occupancy",
    "train_single_view",
    "train_translators",
    "DepthTranslator",
    "PatchDiscriminator",
    "camera_vector",
    "normal_from_depth",
    "normal_map_torch",
    "Aggregator",
    "DECODE_CHUNK",
    "MS_CHANNELS",
    "MS_RESOLUTIONS",
    "MultiScaleEncoder",
    "MultiScaleFeatureGrids",
    "OccupancyHead",
    "POINT_FEATURE_DIM",
    "decode_logits",
    "decode_occupancy_values",
    "grid_gather_trilinear",
    "point_features",
]
