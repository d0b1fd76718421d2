"""Versioned checkpoint container with byte-stable round-trips.

Format: magic + uint64 header length + canonical JSON header (sorted keys)
+ concatenated raw little-endian tensor bytes. Zip-based formats embed
timestamps, which would break the load->save byte-identity contract.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import torch

from .config import TrainConfig
from .model import COMPONENTS, ModelBundle

_MAGIC = b"SKRC1\n"
_VERSION = 1


def save_checkpoint(bundle: ModelBundle, path) -> None:
    tensors = []
    blobs = []
    offset = 0
    for component in COMPONENTS:
        for mi, module in enumerate(bundle.modules_by_component()[component]):
            for name, t in sorted(module.state_dict().items()):
                arr = t.detach().cpu().numpy()
                raw = np.ascontiguousarray(arr).astype(arr.dtype.newbyteorder("<")).tobytes()
                tensors.append(
                    {
                        "key": f"{component}.{mi}.{name}",
                        "dtype": str(arr.dtype),
                        "shape": list(arr.shape),
                        "offset": offset,
                        "nbytes": len(raw),
                    }
                )
                blobs.append(raw)
                offset += len(raw)
    header = {
        "version": _VERSION,
        "config": bundle.config.to_json(),
        "config_hash": bundle.config.hash(),
        "trained": sorted(bundle.trained),
        "tensors": tensors,
    }
    head = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", len(head)))
        fh.write(head)
        for b in blobs:
            fh.write(b)


def load_checkpoint(path) -> ModelBundle:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen))
        if header["version"] != _VERSION:
            raise ValueError(f"unsupported checkpoint version {header['version']}")
        body = fh.read()

    bundle = ModelBundle(TrainConfig.from_json(header["config"]))
    state: dict[str, dict[int, dict[str, torch.Tensor]]] = {}
    for meta in header["tensors"]:
        component, mi, name = meta["key"].split(".", 2)
        arr = np.frombuffer(
            body, dtype=np.dtype(meta["dtype"]), count=int(np.prod(meta["shape"]) or 1),
            offset=meta["offset"],
        )
        if not meta["shape"]:
            arr = arr[:1].reshape(())
        else:
            arr = arr.reshape(meta["shape"])
        state.setdefault(component, {}).setdefault(int(mi), {})[name] = torch.from_numpy(
            arr.copy()
        )
    for component, mods in bundle.modules_by_component().items():
        for mi, module in enumerate(mods):
            module.load_state_dict(state[component][mi])
    bundle.trained = set(header["trained"])
    bundle.eval()
    return bundle
