"""PNG <-> [-1, 1] float image conversion and tensor layout helpers."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import torch
from PIL import Image


def load_png(path: str | Path) -> np.ndarray:
    """8-bit RGB PNG to a float32 (H, W, 3) array in [-1, 1]."""
    with Image.open(path) as img:
        rgb = np.asarray(img.convert("RGB"), dtype=np.float32)
    return rgb / 127.5 - 1.0


def to_uint8(image_hwc: np.ndarray) -> np.ndarray:
    arr = np.clip(np.asarray(image_hwc, dtype=np.float32), -1.0, 1.0)
    return np.round((arr + 1.0) * 127.5).astype(np.uint8)


def save_png(image_hwc: np.ndarray, path: str | Path) -> None:
    Image.fromarray(to_uint8(image_hwc), mode="RGB").save(path, format="PNG")


def png_bytes(image_hwc: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(to_uint8(image_hwc), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def hwc_to_tensor(image_hwc: np.ndarray) -> torch.Tensor:
    """(H, W, 3) float array to a (3, H, W) float32 tensor."""
    return torch.from_numpy(np.ascontiguousarray(image_hwc, dtype=np.float32)).permute(2, 0, 1)


def tensor_to_hwc(image_chw: torch.Tensor) -> np.ndarray:
    return image_chw.detach().cpu().permute(1, 2, 0).numpy()


def stack_images(images_hwc: list[np.ndarray]) -> torch.Tensor:
    """List of (H, W, 3) arrays to a (B, 3, H, W) float32 batch."""
    return torch.stack([hwc_to_tensor(img) for img in images_hwc])
