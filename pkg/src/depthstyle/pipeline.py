"""End-to-end stylization: encode, restyle, depth-blend, decode.

The full path renders

    out = decode( M * restyled + (1 - M) * content_features )

where M = alpha * mask at feature resolution. With M identically 1 this is
plain arbitrary style transfer; with alpha = 0 it reduces to the
reconstruction baseline decode(encode(content)).
"""

from __future__ import annotations

import hashlib
import threading
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import nn
from .adain import StyleSummary, adain, blend_spatial, mix_styles
from .depth import DepthControls, normalize_depth, resample_to, shape_mask
from .errors import DegenerateDepthError, InvalidInputError
from .image_io import RasterImage, crop_to, from_tensor, pad_to_multiple, to_tensor
from .tensor import Tensor3, channel_moments
from .weights import load_weights

# 3 pools in the encoder: spatial dims must be divisible by 8.
SPATIAL_MULTIPLE = 8

ENCODER_FILENAME = "encoder.adsw"
DECODER_FILENAME = "decoder.adsw"


@dataclass(frozen=True)
class StylizeParams:
    """User-facing stylization controls."""

    alpha: float = 1.0
    depth_controls: DepthControls = field(default_factory=DepthControls)
    style_weights: tuple[float, ...] | None = None
    epsilon: float = 1e-5

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"alpha must be in [0, 1], got {self.alpha}")


class Engine:
    """Encoder/decoder pair plus a content-addressed style summary cache.

    Read-only after construction; safe to share across threads.
    """

    def __init__(self, encoder: nn.Network, decoder: nn.Network):
        self.encoder = encoder
        self.decoder = decoder
        self._summary_cache: dict[str, StyleSummary] = {}
        self._cache_lock = threading.Lock()

    @classmethod
    def load(cls, weights_dir) -> "Engine":
        weights_dir = Path(weights_dir)
        encoder = nn.build_encoder(
            load_weights((weights_dir / ENCODER_FILENAME).read_bytes())
        )
        decoder = nn.build_decoder(
            load_weights((weights_dir / DECODER_FILENAME).read_bytes())
        )
        return cls(encoder, decoder)

    def encode(self, t: Tensor3) -> Tensor3:
        return nn.forward(self.encoder, t)

    def decode(self, t: Tensor3) -> Tensor3:
        return nn.forward(self.decoder, t)

    def style_summary(self, style: RasterImage) -> StyleSummary:
        """Channel moments of the style's encoded features.

        Moments are resolution-independent, so the style keeps its own size
        (padded only for pool divisibility).
        """
        t, _ = pad_to_multiple(to_tensor(style), SPATIAL_MULTIPLE)
        return StyleSummary(stats=channel_moments(self.encode(t)))

    def cached_style_summary(self, style_bytes: bytes, style: RasterImage) -> StyleSummary:
        """Summary keyed by a hash of the style file bytes."""
        key = hashlib.sha256(style_bytes).hexdigest()
        with self._cache_lock:
            cached = self._summary_cache.get(key)
        if cached is not None:
            return cached
        summary = self.style_summary(style)
        with self._cache_lock:
            return self._summary_cache.setdefault(key, summary)


def _mixed_summary(engine: Engine, styles: list[RasterImage], params: StylizeParams) -> StyleSummary:
    if not styles:
        raise InvalidInputError("need at least one style image")
    summaries = [engine.style_summary(s) for s in styles]
    if params.style_weights is None:
        weights = np.full(len(summaries), 1.0 / len(summaries))
    else:
        weights = np.asarray(params.style_weights, dtype=np.float64)
    return mix_styles(summaries, weights)


def effective_mask(
    feature_hw: tuple[int, int],
    params: StylizeParams,
    depth=None,
    mask=None,
) -> np.ndarray:
    """Per-pixel strength M = alpha * D at feature resolution.

    Depth input is min-max normalized first; an explicit mask is taken as-is.
    Both pass through the min/max shaping controls at full resolution, then
    get resampled down, so sharp near/far boundaries survive the shaping.
    """
    fh, fw = feature_hw
    if depth is not None and mask is not None:
        raise InvalidInputError("depth and explicit mask are mutually exclusive")
    if depth is not None:
        try:
            base = normalize_depth(depth)
        except DegenerateDepthError:
            warnings.warn(
                "constant depth map: falling back to uniform stylization",
                stacklevel=2,
            )
            base = None
    elif mask is not None:
        base = np.asarray(mask, dtype=np.float64)
    else:
        base = None
    if base is None:
        return np.full((fh, fw), np.float32(params.alpha))
    shaped = shape_mask(base, params.depth_controls)
    resampled = resample_to(shaped, fh, fw)
    if params.alpha == 1.0:
        return resampled
    return (np.float32(params.alpha) * resampled).astype(np.float32)


def blend_features(
    content_features: Tensor3,
    styled_features: Tensor3,
    mask: np.ndarray,
) -> Tensor3:
    """Feature-space blend step, exposed for analysis and tests."""
    return blend_spatial(styled_features, content_features, mask)


def stylize(
    engine: Engine,
    content: RasterImage,
    styles: list[RasterImage],
    params: StylizeParams | None = None,
    depth=None,
    mask=None,
) -> RasterImage:
    """Render `content` in the mixed style, strength modulated by depth."""
    params = params or StylizeParams()
    if depth is not None:
        depth = np.asarray(depth)
        if depth.shape != (content.height, content.width):
            raise InvalidInputError(
                f"depth dims {depth.shape} do not match content "
                f"{(content.height, content.width)}"
            )
    summary = _mixed_summary(engine, styles, params)
    padded, dims = pad_to_multiple(to_tensor(content), SPATIAL_MULTIPLE)
    content_features = engine.encode(padded)
    styled_features = adain(content_features, summary, epsilon=params.epsilon)
    m = effective_mask(content_features.shape[1:], params, depth=depth, mask=mask)
    blended = blend_features(content_features, styled_features, m)
    return from_tensor(crop_to(engine.decode(blended), dims))


def reconstruct(engine: Engine, content: RasterImage) -> RasterImage:
    """Decode of unmodified content features: the zero-style baseline."""
    padded, dims = pad_to_multiple(to_tensor(content), SPATIAL_MULTIPLE)
    return from_tensor(crop_to(engine.decode(engine.encode(padded)), dims))
