"""Adaptive instance normalization and the feature-space blending steps.

A style is fully represented by the channel moments of its encoded features,
so restyling renormalizes content features channel-wise to those moments.
Strength control then blends the restyled features back toward the content
features, either with one global scalar or per-pixel with a depth mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .tensor import ChannelStats, Tensor3, as_tensor3, channel_moments, elementwise_affine


@dataclass(frozen=True)
class StyleSummary:
    """Channel moments of a style image's encoded features."""

    stats: ChannelStats

    @property
    def channels(self) -> int:
        return self.stats.channels


def adain(x: Tensor3, style: StyleSummary, epsilon: float = 1e-5) -> Tensor3:
    """Renormalize each channel of `x` to the style's mean and std.

    out[c] = std_y[c] * (x[c] - mean_x[c]) / sqrt(var_x[c] + epsilon) + mean_y[c]

    `epsilon` guards the division for constant channels; set it to 0 only on
    inputs with non-degenerate variance.
    """
    x = as_tensor3(x)
    if style.channels != x.shape[0]:
        raise InvalidInputError(
            f"style has {style.channels} channels, input has {x.shape[0]}"
        )
    if epsilon < 0:
        raise InvalidInputError("epsilon must be non-negative")
    own = channel_moments(x)
    scale = style.stats.stds / np.sqrt(own.stds**2 + epsilon)
    shift = style.stats.means - scale * own.means
    return elementwise_affine(x, scale, shift)


def blend_global(styled: Tensor3, content: Tensor3, alpha: float) -> Tensor3:
    """out = alpha * styled + (1 - alpha) * content, alpha in [0, 1]."""
    styled = as_tensor3(styled)
    content = as_tensor3(content)
    if styled.shape != content.shape:
        raise InvalidInputError(
            f"shape mismatch: styled {styled.shape} vs content {content.shape}"
        )
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInputError(f"alpha must be in [0, 1], got {alpha}")
    # Exact at the endpoints so strength-0/1 runs are bit-reproducible.
    if alpha == 1.0:
        return styled.copy()
    if alpha == 0.0:
        return content.copy()
    a = np.float32(alpha)
    return a * styled + (np.float32(1.0) - a) * content


def blend_spatial(styled: Tensor3, content: Tensor3, mask: np.ndarray) -> Tensor3:
    """Per-pixel blend: out[c,i,j] = m[i,j]*styled[c,i,j] + (1-m[i,j])*content[c,i,j].

    The mask is broadcast over channels; values must lie in [0, 1]. A 0/1
    hard mask therefore selects styled or content features exactly.
    """
    styled = as_tensor3(styled)
    content = as_tensor3(content)
    if styled.shape != content.shape:
        raise InvalidInputError(
            f"shape mismatch: styled {styled.shape} vs content {content.shape}"
        )
    mask = np.asarray(mask, dtype=np.float32)
    if mask.shape != styled.shape[1:]:
        raise InvalidInputError(
            f"mask shape {mask.shape} does not match feature extent {styled.shape[1:]}"
        )
    if mask.min() < 0.0 or mask.max() > 1.0:
        raise InvalidInputError("mask values must lie in [0, 1]")
    if np.all(mask == 1.0):
        return styled.copy()
    if np.all(mask == 0.0):
        return content.copy()
    m = mask[None, :, :]
    out = m * styled + (np.float32(1.0) - m) * content
    # Hard-mask pixels must select the pure paths exactly despite fp blending.
    ones = mask == 1.0
    zeros = mask == 0.0
    if ones.any():
        out[:, ones] = styled[:, ones]
    if zeros.any():
        out[:, zeros] = content[:, zeros]
    return out


def mix_styles(summaries: list[StyleSummary], weights) -> StyleSummary:
    """Convex combination of style summaries in moment space."""
    if not summaries:
        raise InvalidInputError("need at least one style summary")
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if weights.shape[0] != len(summaries):
        raise InvalidInputError(
            f"{len(summaries)} summaries but {weights.shape[0]} weights"
        )
    if np.any(weights < 0):
        raise InvalidInputError("style weights must be non-negative")
    if abs(weights.sum() - 1.0) > 1e-6:
        raise InvalidInputError(f"style weights must sum to 1, got {weights.sum()}")
    channels = summaries[0].channels
    for s in summaries[1:]:
        if s.channels != channels:
            raise InvalidInputError("style summaries have mismatched channel counts")
    if weights[0] == 1.0:
        return summaries[0]
    means = sum(w * s.stats.means for w, s in zip(weights, summaries))
    stds = sum(w * s.stats.stds for w, s in zip(weights, summaries))
    return StyleSummary(stats=ChannelStats(means=means, stds=stds))
