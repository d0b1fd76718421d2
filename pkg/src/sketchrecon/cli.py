"""Command-line entry points for data generation, training, eval, and serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dataset import (
    DatasetView,
    ShapeRecord,
    build_dataset,
    sample_viewpoints,
    synth_mesh,
)
from .geom import Camera, save_obj
from .metrics import evaluate_multiview, run_viewpoint_study
from .nets import COMPONENTS, ModelBundle, TrainConfig, load_checkpoint, save_checkpoint
from .pipeline import Engine, SessionConfig, load_history


def _log(msg: str) -> None:
    print(msg, flush=True)


def cmd_gen_data(args) -> int:
    categories = [c.strip() for c in args.categories.split(",") if c.strip()]
    if args.views == "all":
        cameras = sample_viewpoints()
    else:
        cameras = []
        for token in args.views.split(","):
            az, el = token.split("_")
            cameras.append(Camera(float(az), float(el)))
    records = []
    for category in categories:
        for i in range(args.shapes):
            split = "test" if i >= args.shapes - args.test_shapes else "train"
            mesh = synth_mesh(category, seed=args.seed * 100003 + i)
            records.append(ShapeRecord(f"{category[0]}{i:03d}", category, mesh, split))
    _log(f"writing {len(records)} shapes x {len(cameras)} views to {args.root}")
    build_dataset(
        args.root,
        records,
        cameras,
        n_uniform=args.points // 2,
        n_near_surface=args.points - args.points // 2,
        seed=args.seed,
        progress=lambda i, n: _log(f"  shape {i}/{n}") if i % 5 == 0 or i == n else None,
    )
    return 0


def cmd_train_single(args) -> int:
    from .nets import train_single_view

    config = TrainConfig.load(args.config) if args.config else TrainConfig()
    bundle, history = train_single_view(args.data, config, out_path=args.out, log=_log)
    if args.history_out:
        with open(args.history_out, "w") as fh:
            json.dump(history, fh, indent=1)
    _log(f"saved checkpoint to {args.out} (config {bundle.config.hash()})")
    return 0


def cmd_train_agg(args) -> int:
    from .nets import train_aggregation

    bundle = load_checkpoint(args.checkpoint)
    config = TrainConfig.load(args.config) if args.config else bundle.config
    _, history = train_aggregation(args.data, bundle, config, out_path=args.out, log=_log)
    if args.history_out:
        with open(args.history_out, "w") as fh:
            json.dump(history, fh, indent=1)
    _log(f"saved checkpoint to {args.out}")
    return 0


def _load_eval_shapes(data_root, category, split, limit):
    ds = DatasetView(data_root)
    ids = ds.shape_ids(category, split) or ds.shape_ids(category)
    if limit:
        ids = ids[:limit]
    return [(sid, ds.mesh(category, sid)) for sid in ids]


def cmd_evaluate(args) -> int:
    bundle = load_checkpoint(args.checkpoint)
    engine = Engine(bundle)
    shapes = _load_eval_shapes(args.data, args.category, args.split, args.limit)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.study == "viewpoint":
        report = run_viewpoint_study(
            engine,
            shapes,
            args.category,
            n_samples=args.samples,
            mc_resolution=args.mc_resolution,
            seed=args.seed,
        )
    else:
        report = evaluate_multiview(
            engine,
            shapes,
            args.category,
            n_views=args.views,
            seed=args.seed,
            n_samples=args.samples,
            mc_resolution=args.mc_resolution,
        )
    report.save_json(out_dir / f"{report.kind}.json")
    report.save_csv(out_dir / f"{report.kind}.csv")
    _log(json.dumps(report.aggregate, indent=1, sort_keys=True))
    _log(f"wrote {out_dir / report.kind}.json/.csv")
    return 0


def cmd_reconstruct(args) -> int:
    bundle = load_checkpoint(args.checkpoint)
    engine = Engine(bundle)
    history = load_history(args.history)
    config = SessionConfig(mc_resolution=args.mc_resolution)
    session = engine.replay(args.category, history, config)
    save_obj(session.mesh, args.out)
    _log(f"replayed {len(history)} ops -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    bundle = load_checkpoint(args.checkpoint)
    engine = Engine(bundle)
    app = create_app(
        engine,
        sessions_dir=args.sessions_dir,
        dataset_root=args.data,
        session_config=SessionConfig(mc_resolution=args.mc_resolution),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_init_weights(args) -> int:
    bundle = ModelBundle(TrainConfig(ngf=args.ngf, ndf=8, seed=args.seed))
    bundle.mark_trained(*COMPONENTS)
    save_checkpoint(bundle, args.out)
    _log(f"wrote randomly initialized (untrained-quality) checkpoint to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sketchrecon")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="synthesize a training dataset")
    p.add_argument("--root", required=True)
    p.add_argument("--categories", default="chair")
    p.add_argument("--shapes", type=int, default=20)
    p.add_argument("--test-shapes", type=int, default=0)
    p.add_argument("--views", default="all", help="'all' (120 cameras) or az_el,az_el,...")
    p.add_argument("--points", type=int, default=2048)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_gen_data)

    p = sub.add_parser("train-single", help="train translators + occupancy nets")
    p.add_argument("--data", required=True)
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--history-out")
    p.set_defaults(fn=cmd_train_single)

    p = sub.add_parser("train-agg", help="train the aggregation module")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--history-out")
    p.set_defaults(fn=cmd_train_agg)

    p = sub.add_parser("evaluate", help="run the evaluation harness")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--category", default="chair")
    p.add_argument("--split", default="train")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--study", choices=("multiview", "viewpoint"), default="multiview")
    p.add_argument("--views", type=int, default=3)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--mc-resolution", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("reconstruct", help="replay a recorded session log")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--history", required=True)
    p.add_argument("--category", default="chair")
    p.add_argument("--mc-resolution", type=int, default=128)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("serve", help="run the HTTP session API")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", default=None, help="dataset root for shadow guides")
    p.add_argument("--sessions-dir", default="sessions")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--mc-resolution", type=int, default=128)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("init-weights", help="write a random-init checkpoint (smoke tests)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ngf", type=int, default=16)
    p.set_defaults(fn=cmd_init_weights)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
