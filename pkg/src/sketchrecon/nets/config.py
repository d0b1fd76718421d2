"""Training configuration: one declarative record, hashed into checkpoints."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field


@dataclass
class TrainConfig:
    # schedule
    epochs: int = 200
    lr: float = 1e-4
    batch_size: int = 4
    seed: int = 0
    # loss weights (translator phase)
    w_l1: float = 100.0
    w_gan: float = 1.0
    w_normal: float = 10.0
    # architecture widths
    ngf: int = 64
    ndf: int = 32
    # occupancy phase
    volume_batch: int = 2
    points_per_step: int = 1024
    occupancy_epochs: int | None = None  # defaults to `epochs`
    # aggregation phase
    agg_epochs: int | None = None  # defaults to `epochs`
    max_views_per_episode: int = 3
    # robustness augmentation
    blank_prob: float = 0.05
    # which training cameras to use; None = every manifest camera
    train_view_keys: list[str] | None = field(default=None)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in obj.items() if k in known})

    @classmethod
    def load(cls, path) -> "TrainConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    def hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]
