"""Training loops: translators + occupancy nets, then the aggregation module.

The single-view phase trains the two translators as paired image translation
(adversarial + L1 + depth-derived normal loss) and the lifter/decoder stack
with per-point binary cross-entropy on sampled occupancies. The aggregation
phase freezes everything trained so far and optimizes only the aggregator on
episodes of 2-3 sequential views run through the fusion recursion.

Refined-depth references are teacher-forced from ground-truth depth: clean
targets for the loss, degraded copies (smooth noise fields + random erasures)
as the reference input, so the refinement translator learns to trust the
sketch where the reference is wrong.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import cv2
import numpy as np
import torch
import torch.nn.functional as F

from ..dataset import DatasetView, view_key
from ..geom import Camera
from .config import TrainConfig
from .lifter import lift_features, volume_to_tensor
from .model import ModelBundle
from .translator import camera_vector, normal_map_torch
from .volumes import decode_logits, MultiScaleFeatureGrids


@dataclass
class ViewRec:
    camera: Camera
    sketch: np.ndarray
    depth: np.ndarray


class TrainingData:
    """All training (shape, view) rasters plus occupancy samples, in memory."""

    def __init__(
        self,
        ds: DatasetView,
        config: TrainConfig,
        split: str = "train",
        view_keys: list[str] | None = None,
    ):
        keys = view_keys if view_keys is not None else config.train_view_keys
        wanted = set(keys) if keys else None
        self.items: list[tuple[str, str]] = []
        self.views: dict[tuple[str, str], list[ViewRec]] = {}
        self.occupancy: dict[tuple[str, str], tuple[np.ndarray, np.ndarray]] = {}
        for category in ds.categories():
            for sid in ds.shape_ids(category, split):
                key = (category, sid)
                recs = []
                for cam in ds.cameras:
                    if wanted is not None and view_key(cam) not in wanted:
                        continue
                    v = ds.view(category, sid, cam)
                    recs.append(
                        ViewRec(cam, v.sketch.astype(np.float32), v.depth.astype(np.float32))
                    )
                if not recs:
                    continue
                occ = ds.occupancy(category, sid)
                self.items.append(key)
                self.views[key] = recs
                self.occupancy[key] = (
                    occ.points.astype(np.float32),
                    occ.labels.astype(np.float32),
                )
        if not self.items:
            raise ValueError("dataset has no training samples")

    def all_pairs(self) -> list[tuple[tuple[str, str], int]]:
        return [(key, vi) for key in self.items for vi in range(len(self.views[key]))]


def degrade_depth(depth: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Imperfect-reconstruction stand-in for a rendered reference depth."""
    h, w = depth.shape
    out = depth.astype(np.float32).copy()
    amp = rng.uniform(0.0, 0.06)
    if amp > 1e-4:
        coarse = rng.normal(0.0, amp, size=(h // 8, w // 8)).astype(np.float32)
        field = cv2.resize(coarse, (w, h), interpolation=cv2.INTER_LINEAR)
        fg = out < 0.999
        out[fg] = out[fg] + field[fg]
    for _ in range(int(rng.integers(0, 3))):
        eh = int(rng.integers(10, max(11, h // 3)))
        ew = int(rng.integers(10, max(11, w // 3)))
        r0 = int(rng.integers(0, h - eh))
        c0 = int(rng.integers(0, w - ew))
        out[r0 : r0 + eh, c0 : c0 + ew] = 1.0
    return np.clip(out, 0.0, 1.0)


def _translator_batch(data: TrainingData, pairs, rng, config):
    sketches, depths, cams = [], [], []
    for key, vi in pairs:
        rec = data.views[key][vi]
        if rng.random() < config.blank_prob:
            sketches.append(np.zeros_like(rec.sketch))
            depths.append(np.ones_like(rec.depth))
        else:
            sketches.append(rec.sketch)
            depths.append(rec.depth)
        cams.append(camera_vector(rec.camera))
    s = torch.from_numpy(np.stack(sketches))[:, None]
    d = torch.from_numpy(np.stack(depths))[:, None]
    return s, d, torch.stack(cams)


def _gan_d_loss(disc, cond, real, fake):
    real_logits = disc(torch.cat([cond, real], dim=1))
    fake_logits = disc(torch.cat([cond, fake.detach()], dim=1))
    return 0.5 * (
        F.binary_cross_entropy_with_logits(real_logits, torch.ones_like(real_logits))
        + F.binary_cross_entropy_with_logits(fake_logits, torch.zeros_like(fake_logits))
    )


def _gan_g_loss(disc, cond, fake):
    logits = disc(torch.cat([cond, fake], dim=1))
    return F.binary_cross_entropy_with_logits(logits, torch.ones_like(logits))


def _translator_losses(pred, target, config):
    l1 = F.l1_loss(pred, target)
    normal = F.l1_loss(normal_map_torch(pred), normal_map_torch(target))
    return config.w_l1 * l1 + config.w_normal * normal, float(l1.detach())


def train_translators(
    bundle: ModelBundle, data: TrainingData, config: TrainConfig, log=None
) -> dict:
    from .translator import PatchDiscriminator

    torch.manual_seed(config.seed + 1)
    rng = np.random.default_rng(config.seed + 1)
    disc_t = PatchDiscriminator(in_channels=2, ndf=config.ndf)
    disc_star = PatchDiscriminator(in_channels=3, ndf=config.ndf)
    nets = [bundle.translator_t, bundle.translator_tstar, disc_t, disc_star]
    for n in nets:
        n.train()
    betas = (0.5, 0.999)
    opt_t = torch.optim.Adam(bundle.translator_t.parameters(), lr=config.lr, betas=betas)
    opt_star = torch.optim.Adam(bundle.translator_tstar.parameters(), lr=config.lr, betas=betas)
    opt_dt = torch.optim.Adam(disc_t.parameters(), lr=config.lr, betas=betas)
    opt_ds = torch.optim.Adam(disc_star.parameters(), lr=config.lr, betas=betas)

    history = {"loss": [], "l1_t": [], "l1_tstar": []}
    pairs = data.all_pairs()
    for epoch in range(config.epochs):
        t0 = time.time()
        rng.shuffle(pairs)
        ep_loss, ep_l1t, ep_l1s, steps = 0.0, 0.0, 0.0, 0
        for start in range(0, len(pairs), config.batch_size):
            chunk = pairs[start : start + config.batch_size]
            s, d_gt, cams = _translator_batch(data, chunk, rng, config)

            # first-view translator
            pred = bundle.translator_t(s, cams)
            loss_t, l1_t = _translator_losses(pred, d_gt, config)
            loss_t = loss_t + config.w_gan * _gan_g_loss(disc_t, s, pred)
            opt_t.zero_grad()
            loss_t.backward()
            opt_t.step()
            opt_dt.zero_grad()
            _gan_d_loss(disc_t, s, d_gt, pred).backward()
            opt_dt.step()

            # refinement translator with degraded references
            d_ref = torch.from_numpy(
                np.stack([degrade_depth(dd[0].numpy(), rng) for dd in d_gt])
            )[:, None]
            x = torch.cat([s, d_ref], dim=1)
            pred_s = bundle.translator_tstar(x, cams)
            loss_s, l1_s = _translator_losses(pred_s, d_gt, config)
            loss_s = loss_s + config.w_gan * _gan_g_loss(disc_star, x, pred_s)
            opt_star.zero_grad()
            loss_s.backward()
            opt_star.step()
            opt_ds.zero_grad()
            _gan_d_loss(disc_star, x, d_gt, pred_s).backward()
            opt_ds.step()

            ep_loss += float(loss_t.detach()) + float(loss_s.detach())
            ep_l1t += l1_t
            ep_l1s += l1_s
            steps += 1
        history["loss"].append(ep_loss / steps)
        history["l1_t"].append(ep_l1t / steps)
        history["l1_tstar"].append(ep_l1s / steps)
        if log:
            log(
                f"[translator] epoch {epoch + 1}/{config.epochs} "
                f"loss={history['loss'][-1]:.4f} l1_t={history['l1_t'][-1]:.4f} "
                f"l1_t*={history['l1_tstar'][-1]:.4f} ({time.time() - t0:.1f}s)"
            )
    for n in nets:
        n.eval()
    bundle.mark_trained("translator_t", "translator_tstar")
    return history


def _occupancy_step_inputs(data: TrainingData, key, vi, rng, config):
    rec = data.views[key][vi]
    if rng.random() < config.blank_prob:
        vol = np.zeros((64, 64, 64, 3), dtype=np.float32)
        vol[..., 1] = 1.0
        from .lifter import camera_projection_lut

        vol[..., 2] = camera_projection_lut(rec.camera)[1].reshape(64, 64, 64)
        pts = rng.uniform(-0.5, 0.5, size=(config.points_per_step, 3)).astype(np.float32)
        labels = np.zeros(config.points_per_step, dtype=np.float32)
    else:
        vol = lift_features(rec.sketch, rec.depth, rec.camera)
        all_pts, all_labels = data.occupancy[key]
        sel = rng.choice(len(all_pts), size=config.points_per_step, replace=False)
        pts, labels = all_pts[sel], all_labels[sel]
    return vol, pts, labels


def train_occupancy(
    bundle: ModelBundle, data: TrainingData, config: TrainConfig, log=None
) -> dict:
    torch.manual_seed(config.seed + 2)
    rng = np.random.default_rng(config.seed + 2)
    nets = [bundle.lifter, bundle.ms_encoder, bundle.head]
    for n in nets:
        n.train()
    params = [p for n in nets for p in n.parameters()]
    opt = torch.optim.Adam(params, lr=config.lr)
    epochs = config.occupancy_epochs or config.epochs

    history = {"bce": []}
    for epoch in range(epochs):
        t0 = time.time()
        order = list(data.items)
        rng.shuffle(order)
        ep_loss, steps = 0.0, 0
        for bstart in range(0, len(order), config.volume_batch):
            batch = order[bstart : bstart + config.volume_batch]
            opt.zero_grad()
            vols, pts_list, label_list = [], [], []
            for key in batch:
                vi = int(rng.integers(0, len(data.views[key])))
                vol, pts, labels = _occupancy_step_inputs(data, key, vi, rng, config)
                vols.append(volume_to_tensor(vol))
                pts_list.append(torch.from_numpy(pts))
                label_list.append(torch.from_numpy(labels))
            # one batched conv pass over the stacked volumes
            enc = bundle.lifter(torch.cat(vols, dim=0))
            ms = bundle.ms_encoder(enc)
            loss = 0.0
            for bi in range(len(batch)):
                grids = MultiScaleFeatureGrids(tuple(g[bi : bi + 1] for g in ms))
                logits = decode_logits(bundle.head, grids, pts_list[bi])
                loss = loss + F.binary_cross_entropy_with_logits(logits, label_list[bi])
            loss = loss / len(batch)
            loss.backward()
            opt.step()
            ep_loss += float(loss.detach())
            steps += 1
        history["bce"].append(ep_loss / steps)
        if log:
            log(
                f"[occupancy] epoch {epoch + 1}/{epochs} "
                f"bce={history['bce'][-1]:.4f} ({time.time() - t0:.1f}s)"
            )
    for n in nets:
        n.eval()
    bundle.mark_trained("lifter", "decoder")
    return history


def train_single_view(dataset, config: TrainConfig, out_path=None, log=None):
    """Full single-view training: translators, then lifter+decoder.

    Returns (bundle, history). `dataset` is a DatasetView or a root path.
    """
    ds = dataset if isinstance(dataset, DatasetView) else DatasetView(dataset)
    data = TrainingData(ds, config)
    bundle = ModelBundle(config)
    history = {
        "translator": train_translators(bundle, data, config, log),
        "occupancy": train_occupancy(bundle, data, config, log),
    }
    if out_path is not None:
        from .checkpoint import save_checkpoint

        save_checkpoint(bundle, out_path)
    return bundle, history


def frozen_state_bytes(bundle: ModelBundle) -> dict[str, bytes]:
    out = {}
    for component, mods in bundle.modules_by_component().items():
        if component == "aggregator":
            continue
        for mi, m in enumerate(mods):
            for name, t in m.state_dict().items():
                out[f"{component}.{mi}.{name}"] = t.numpy().tobytes()
    return out


def train_aggregation(dataset, bundle: ModelBundle, config: TrainConfig, out_path=None, log=None):
    """Train only the aggregator; every other parameter stays bit-identical."""
    bundle.require("translator_t", "translator_tstar", "lifter", "decoder")
    ds = dataset if isinstance(dataset, DatasetView) else DatasetView(dataset)
    data = TrainingData(ds, config)
    before = frozen_state_bytes(bundle)

    torch.manual_seed(config.seed + 3)
    rng = np.random.default_rng(config.seed + 3)
    for component, mods in bundle.modules_by_component().items():
        for m in mods:
            m.requires_grad_(component == "aggregator")
    bundle.aggregator.train()
    opt = torch.optim.Adam(bundle.aggregator.parameters(), lr=config.lr)
    epochs = config.agg_epochs or config.epochs

    history = {"bce": []}
    for epoch in range(epochs):
        t0 = time.time()
        order = list(data.items)
        rng.shuffle(order)
        ep_loss, steps = 0.0, 0
        for key in order:
            recs = data.views[key]
            k = min(int(rng.integers(2, config.max_views_per_episode + 1)), len(recs))
            view_ids = rng.choice(len(recs), size=k, replace=False)
            all_pts, all_labels = data.occupancy[key]
            opt.zero_grad()
            with torch.no_grad():
                volumes = []
                for vi in view_ids:
                    rec = recs[vi]
                    vol = lift_features(rec.sketch, rec.depth, rec.camera)
                    volumes.append(bundle.lifter(volume_to_tensor(vol)))
            a = volumes[0]
            loss_total = 0.0
            for i in range(1, k):
                a = bundle.aggregator(a, volumes[i])
                sel = rng.choice(len(all_pts), size=config.points_per_step, replace=False)
                grids = MultiScaleFeatureGrids(bundle.ms_encoder(a))
                logits = decode_logits(bundle.head, grids, torch.from_numpy(all_pts[sel]))
                loss = F.binary_cross_entropy_with_logits(
                    logits, torch.from_numpy(all_labels[sel])
                )
                loss_total = loss_total + loss
            loss_total.backward()
            opt.step()
            ep_loss += float(loss_total.detach()) / (k - 1)
            steps += 1
        history["bce"].append(ep_loss / steps)
        if log:
            log(
                f"[aggregator] epoch {epoch + 1}/{epochs} "
                f"bce={history['bce'][-1]:.4f} ({time.time() - t0:.1f}s)"
            )

    bundle.aggregator.eval()
    for _, mods in bundle.modules_by_component().items():
        for m in mods:
            m.requires_grad_(True)
    after = frozen_state_bytes(bundle)
    changed = [k for k in before if before[k] != after[k]]
    if changed:
        raise RuntimeError(f"frozen parameters changed during aggregation: {changed[:3]}")
    bundle.mark_trained("aggregator")
    if out_path is not None:
        from .checkpoint import save_checkpoint

        save_checkpoint(bundle, out_path)
    return bundle, history
