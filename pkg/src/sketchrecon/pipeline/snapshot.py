"""Session persistence: aggregate volume, history log, current mesh."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..geom import Mesh, load_obj, save_obj
from .session import SessionConfig, SessionState


def save_session(session: SessionState, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    meta = {
        "session_id": session.session_id,
        "category": session.category,
        "view_index": session.view_index,
        "config": session.config.to_json(),
    }
    with open(d / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
    with open(d / "history.jsonl", "w") as fh:
        for record in session.history:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    if session.aggregate is not None:
        np.save(d / "aggregate.npy", session.aggregate.astype(np.float32))
    if session.mesh is not None:
        save_obj(session.mesh, d / "mesh.obj")


def load_session(directory) -> SessionState:
    d = Path(directory)
    with open(d / "meta.json") as fh:
        meta = json.load(fh)
    history = []
    hpath = d / "history.jsonl"
    if hpath.exists():
        with open(hpath) as fh:
            history = [json.loads(line) for line in fh if line.strip()]
    aggregate = None
    if (d / "aggregate.npy").exists():
        aggregate = np.load(d / "aggregate.npy")
    mesh: Mesh | None = None
    if (d / "mesh.obj").exists():
        mesh = load_obj(d / "mesh.obj")
    return SessionState(
        session_id=meta["session_id"],
        category=meta["category"],
        view_index=meta["view_index"],
        aggregate=aggregate,
        mesh=mesh,
        history=history,
        config=SessionConfig.from_json(meta["config"]),
    )


def load_history(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
