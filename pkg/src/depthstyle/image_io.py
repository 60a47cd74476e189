"""Color image I/O and conversion to and from planar float tensors.

Pixels live in [0, 1] with no channel-mean subtraction; the weight-file
manifest pins the same convention so checkpoint and engine cannot silently
disagree.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import InvalidInputError
from .tensor import Tensor3, as_tensor3


@dataclass(frozen=True)
class RasterImage:
    """8-bit RGB image, row-major interleaved."""

    pixels: np.ndarray  # uint8, (H, W, 3)

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise InvalidInputError(
                f"expected (H, W, 3) pixel array, got {self.pixels.shape}"
            )
        if self.pixels.dtype != np.uint8:
            raise InvalidInputError(f"expected uint8 pixels, got {self.pixels.dtype}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def load_image(path) -> RasterImage:
    """Read a PNG or binary PPM as 8-bit RGB; alpha is stripped with a warning."""
    try:
        with Image.open(path) as img:
            img.load()
            if img.mode in ("RGBA", "LA", "PA"):
                warnings.warn(
                    f"{os.fspath(path)}: alpha channel stripped", stacklevel=2
                )
            rgb = img.convert("RGB")
            data = np.asarray(rgb, dtype=np.uint8)
    except OSError as exc:
        raise InvalidInputError(f"cannot read image {os.fspath(path)!r}: {exc}") from exc
    return RasterImage(pixels=data)


def save_image(img: RasterImage, path) -> None:
    Image.fromarray(img.pixels, mode="RGB").save(path)


def to_tensor(img: RasterImage) -> Tensor3:
    """Planar float32 (3, H, W) tensor with samples scaled into [0, 1]."""
    planar = np.transpose(img.pixels, (2, 0, 1)).astype(np.float32)
    return planar / np.float32(255.0)


def from_tensor(t: Tensor3) -> RasterImage:
    """Clamp to [0, 1], scale by 255, round half away from zero."""
    t = as_tensor3(t, channels=3)
    clamped = np.clip(t.astype(np.float64), 0.0, 1.0)
    quantized = np.floor(clamped * 255.0 + 0.5).astype(np.uint8)
    return RasterImage(pixels=np.transpose(quantized, (1, 2, 0)))


def pad_to_multiple(t: Tensor3, m: int) -> tuple[Tensor3, tuple[int, int]]:
    """Reflect-pad right/bottom so spatial dims are multiples of `m`.

    Reflection is edge-exclusive (the border sample is not repeated), the
    same convention the convolutions use. Returns the padded tensor and the
    original (height, width) for `crop_to`.
    """
    t = as_tensor3(t)
    if m < 1:
        raise InvalidInputError(f"multiple must be >= 1, got {m}")
    _, h, w = t.shape
    pad_h = (-h) % m
    pad_w = (-w) % m
    if (pad_h and h < 2) or (pad_w and w < 2):
        raise InvalidInputError(
            f"cannot reflect-pad a {h}x{w} tensor: extent smaller than 2"
        )
    if pad_h == 0 and pad_w == 0:
        return t, (h, w)
    padded = np.pad(t, ((0, 0), (0, pad_h), (0, pad_w)), mode="reflect")
    return padded, (h, w)


def crop_to(t: Tensor3, dims: tuple[int, int]) -> Tensor3:
    """Undo `pad_to_multiple` by keeping the top-left dims window."""
    h, w = dims
    t = as_tensor3(t)
    if t.shape[1] < h or t.shape[2] < w:
        raise InvalidInputError(
            f"cannot crop {t.shape[1]}x{t.shape[2]} tensor to {h}x{w}"
        )
    return t[:, :h, :w]
