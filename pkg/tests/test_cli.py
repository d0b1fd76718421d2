import json

import numpy as np
import pytest

from sketchrecon.cli import main
from sketchrecon.dataset import DatasetView
from sketchrecon.geom import Camera
from sketchrecon.nets import TrainConfig, load_checkpoint
from sketchrecon.pipeline import Engine, SessionConfig, save_session


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def micro_data(workdir):
    root = workdir / "data"
    rc = main(
        [
            "gen-data",
            "--root",
            str(root),
            "--categories",
            "chair",
            "--shapes",
            "2",
            "--views",
            "45_15,135_30",
            "--points",
            "256",
            "--seed",
            "3",
        ]
    )
    assert rc == 0
    return root


@pytest.fixture(scope="module")
def micro_checkpoint(workdir, micro_data):
    config = TrainConfig(
        epochs=1,
        occupancy_epochs=1,
        agg_epochs=1,
        lr=1e-4,
        batch_size=2,
        ngf=4,
        ndf=4,
        volume_batch=1,
        points_per_step=128,
        seed=5,
    )
    cfg_path = workdir / "config.json"
    config.save(cfg_path)
    single = workdir / "single.ckpt"
    full = workdir / "full.ckpt"
    assert (
        main(
            [
                "train-single",
                "--data",
                str(micro_data),
                "--config",
                str(cfg_path),
                "--out",
                str(single),
                "--history-out",
                str(workdir / "hist_single.json"),
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "train-agg",
                "--data",
                str(micro_data),
                "--checkpoint",
                str(single),
                "--config",
                str(cfg_path),
                "--out",
                str(full),
            ]
        )
        == 0
    )
    return full


class TestGenData:
    def test_layout_and_manifest(self, micro_data):
        ds = DatasetView(micro_data)
        assert ds.categories() == ["chair"]
        assert len(ds.shape_ids("chair")) == 2
        assert len(ds.cameras) == 2
        view = ds.view("chair", "c000", ds.cameras[0])
        assert view.sketch.shape == (256, 256)
        assert len(ds.occupancy("chair", "c000")) == 256

    def test_gen_data_all_views_count(self, workdir):
        # 'all' expands to the 120-camera grid in the manifest
        root = workdir / "data_all"
        rc = main(
            [
                "gen-data",
                "--root",
                str(root),
                "--categories",
                "airplane",
                "--shapes",
                "1",
                "--views",
                "all",
                "--points",
                "64",
            ]
        )
        assert rc == 0
        ds = DatasetView(root)
        assert len(ds.cameras) == 120
        sid = ds.shape_ids("airplane")[0]
        views_dir = root / "airplane" / sid / "views"
        assert len(list(views_dir.iterdir())) == 120


class TestTraining:
    def test_checkpoint_components_marked(self, micro_checkpoint):
        bundle = load_checkpoint(micro_checkpoint)
        assert bundle.trained == {
            "translator_t",
            "translator_tstar",
            "lifter",
            "aggregator",
            "decoder",
        }

    def test_history_recorded(self, workdir, micro_checkpoint):
        with open(workdir / "hist_single.json") as fh:
            hist = json.load(fh)
        assert len(hist["translator"]["loss"]) == 1
        assert len(hist["occupancy"]["bce"]) == 1
        assert all(np.isfinite(v) for v in hist["translator"]["loss"])


class TestReconstruct:
    def test_replay_bitwise(self, workdir, micro_checkpoint):
        bundle = load_checkpoint(micro_checkpoint)
        engine = Engine(bundle)
        session = engine.session_init("chair", config=SessionConfig(mc_resolution=32))
        sketch = np.zeros((256, 256), dtype=np.float32)
        sketch[90:170, 90] = 1
        sketch[90:170, 170] = 1
        sketch[90, 90:170] = 1
        sketch[170, 90:171] = 1
        engine.generate(session, sketch, Camera(45, 15))
        engine.scale_shape(session, 0.8)
        snap = workdir / "snap"
        save_session(session, snap)

        outs = []
        for name in ("a.obj", "b.obj"):
            rc = main(
                [
                    "reconstruct",
                    "--checkpoint",
                    str(micro_checkpoint),
                    "--history",
                    str(snap / "history.jsonl"),
                    "--category",
                    "chair",
                    "--mc-resolution",
                    "32",
                    "--out",
                    str(workdir / name),
                ]
            )
            assert rc == 0
            outs.append((workdir / name).read_bytes())
        assert outs[0] == outs[1]
        assert outs[0] == (snap / "mesh.obj").read_bytes()


class TestEvaluate:
    def test_deterministic_reports(self, workdir, micro_data, micro_checkpoint):
        reports = []
        for name in ("e1", "e2"):
            out = workdir / name
            rc = main(
                [
                    "evaluate",
                    "--data",
                    str(micro_data),
                    "--checkpoint",
                    str(micro_checkpoint),
                    "--category",
                    "chair",
                    "--study",
                    "multiview",
                    "--views",
                    "2",
                    "--samples",
                    "500",
                    "--mc-resolution",
                    "32",
                    "--seed",
                    "7",
                    "--out-dir",
                    str(out),
                ]
            )
            assert rc == 0
            reports.append((out / "multiview.json").read_text())
        assert reports[0] == reports[1]
        body = json.loads(reports[0])
        assert {r["views"] for r in body["rows"]} == {1, 2}
