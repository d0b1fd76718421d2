"""PNG encode/decode for the binary sketch/mask wire format (256x256, 1-bit)."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image


def encode_binary_png(raster: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(raster) > 0.5).save(buf, format="PNG", bits=1)
    return buf.getvalue()


def decode_binary_png(data: bytes) -> np.ndarray:
    # browser canvases emit RGBA PNGs; reduce any mode to a binary raster
    img = Image.open(io.BytesIO(data)).convert("L")
    return (np.asarray(img) > 127).astype(np.float32)


def encode_gray_png(raster: np.ndarray) -> bytes:
    buf = io.BytesIO()
    arr = np.clip(np.asarray(raster, dtype=np.float64) * 255.0, 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()
