"""Dense rank-3 feature arrays and per-channel moment arithmetic.

Feature maps are plain float32 numpy arrays of shape (channels, height, width),
row-major. Moments are accumulated in float64 so statistics stay stable on
large spatial extents, then exposed as float64 vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

# Shape convention for feature maps: (channels, height, width), float32.
Tensor3 = np.ndarray


def as_tensor3(data, channels: int | None = None) -> np.ndarray:
    """Validate and coerce `data` to a float32 (C, H, W) array."""
    arr = np.asarray(data, dtype=np.float32)
    if arr.ndim != 3:
        raise InvalidInputError(f"expected a rank-3 array, got rank {arr.ndim}")
    if arr.shape[1] < 1 or arr.shape[2] < 1:
        raise InvalidInputError(f"empty spatial extent: {arr.shape}")
    if channels is not None and arr.shape[0] != channels:
        raise InvalidInputError(
            f"expected {channels} channels, got {arr.shape[0]}"
        )
    return arr


@dataclass(frozen=True)
class ChannelStats:
    """Per-channel spatial mean and standard deviation of a feature map."""

    means: np.ndarray  # float64, shape (C,)
    stds: np.ndarray   # float64, shape (C,), >= 0

    def __post_init__(self):
        if self.means.shape != self.stds.shape:
            raise InvalidInputError("means and stds must have equal length")
        if np.any(self.stds < 0):
            raise InvalidInputError("standard deviations must be non-negative")

    @property
    def channels(self) -> int:
        return self.means.shape[0]


def channel_moments(x: Tensor3) -> ChannelStats:
    """Spatial mean and population (divide-by-HW) std of each channel."""
    x = as_tensor3(x)
    means = x.mean(axis=(1, 2), dtype=np.float64)
    centered = x.astype(np.float64) - means[:, None, None]
    variances = np.mean(centered * centered, axis=(1, 2))
    return ChannelStats(means=means, stds=np.sqrt(variances))


def elementwise_affine(x: Tensor3, scale, shift) -> Tensor3:
    """Per-channel affine map: out[c] = scale[c] * x[c] + shift[c]."""
    x = as_tensor3(x)
    scale = np.asarray(scale, dtype=np.float32).reshape(-1)
    shift = np.asarray(shift, dtype=np.float32).reshape(-1)
    if scale.shape[0] != x.shape[0] or shift.shape[0] != x.shape[0]:
        raise InvalidInputError(
            f"scale/shift lengths ({scale.shape[0]}, {shift.shape[0]}) "
            f"do not match channel count {x.shape[0]}"
        )
    return x * scale[:, None, None] + shift[:, None, None]
