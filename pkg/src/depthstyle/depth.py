"""Depth map ingestion and shaping into a per-pixel strength mask.

Depth files come from an external monocular estimator; larger sample value
means more distant. After min-max rescaling, 0 marks the nearest pixels and
1 the most distant, so by default distant regions receive more style. The
`invert` control flips that orientation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import DegenerateDepthError, InvalidInputError


@dataclass(frozen=True)
class DepthControls:
    """Min/max shaping of depth influence, plus orientation inversion."""

    dmin: float = 0.0
    dmax: float = 1.0
    invert: bool = False

    def __post_init__(self):
        if not self.dmin < self.dmax:
            raise InvalidInputError(
                f"depth controls require dmin < dmax, got ({self.dmin}, {self.dmax})"
            )


def _as_map(values, name: str = "depth map") -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


def normalize_depth(raw) -> np.ndarray:
    """Min-max rescale a raw depth map to span [0, 1] exactly."""
    arr = _as_map(raw, "raw depth")
    lo, hi = arr.min(), arr.max()
    if hi == lo:
        raise DegenerateDepthError("constant depth map cannot be rescaled")
    return ((arr - lo) / (hi - lo)).astype(np.float32)


def shape_mask(mask, controls: DepthControls) -> np.ndarray:
    """Clamp-rescale mask values through the [dmin, dmax] window."""
    arr = _as_map(mask, "mask")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise InvalidInputError("mask values must lie in [0, 1]")
    out = np.clip((arr - controls.dmin) / (controls.dmax - controls.dmin), 0.0, 1.0)
    if controls.invert:
        out = 1.0 - out
    return out.astype(np.float32)


def resample_to(mask, h: int, w: int) -> np.ndarray:
    """Bilinear, corner-aligned resampling to an h x w grid.

    Output values are convex combinations of the input, clamped to the
    input's [min, max] against float rounding.
    """
    arr = _as_map(mask, "mask")
    if h < 1 or w < 1:
        raise InvalidInputError(f"target size must be positive, got {h}x{w}")
    src_h, src_w = arr.shape
    rows = np.linspace(0.0, src_h - 1.0, h)
    cols = np.linspace(0.0, src_w - 1.0, w)
    r0 = np.floor(rows).astype(int)
    c0 = np.floor(cols).astype(int)
    r1 = np.minimum(r0 + 1, src_h - 1)
    c1 = np.minimum(c0 + 1, src_w - 1)
    fr = (rows - r0)[:, None]
    fc = (cols - c0)[None, :]
    top = arr[np.ix_(r0, c0)] * (1 - fc) + arr[np.ix_(r0, c1)] * fc
    bottom = arr[np.ix_(r1, c0)] * (1 - fc) + arr[np.ix_(r1, c1)] * fc
    out = top * (1 - fr) + bottom * fr
    return np.clip(out, arr.min(), arr.max()).astype(np.float32)


def load_depth(path) -> np.ndarray:
    """Read an 8- or 16-bit single-channel raster into [0, 1] floats."""
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            data = np.asarray(img)
    except OSError as exc:
        raise InvalidInputError(f"cannot read depth file {os.fspath(path)!r}: {exc}") from exc
    if mode == "L":
        return (data.astype(np.float64) / 255.0).astype(np.float32)
    if mode in ("I", "I;16", "I;16B", "I;16L"):
        # 16-bit grayscale; Pillow widens some variants to 32-bit ints.
        if data.max(initial=0) > 65535:
            raise InvalidInputError(
                f"depth file {os.fspath(path)!r} exceeds 16-bit sample range"
            )
        return (data.astype(np.float64) / 65535.0).astype(np.float32)
    raise InvalidInputError(
        f"depth file {os.fspath(path)!r} must be single-channel 8- or 16-bit "
        f"grayscale, got mode {mode!r}"
    )
