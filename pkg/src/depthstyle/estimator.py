"""Estimator-style wrapper so the engine composes with sklearn pipelines.

`fit` digests the style images into a single mixed style summary; `transform`
stylizes content images, optionally guided by per-image depth maps.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .adain import adain, mix_styles
from .depth import DepthControls
from .errors import InvalidInputError
from .image_io import RasterImage, crop_to, from_tensor, pad_to_multiple, to_tensor
from .pipeline import SPATIAL_MULTIPLE, Engine, StylizeParams, blend_features, effective_mask


def _as_raster(x) -> RasterImage:
    if isinstance(x, RasterImage):
        return x
    arr = np.asarray(x)
    if arr.dtype != np.uint8:
        raise InvalidInputError("images must be uint8 (H, W, 3) arrays")
    return RasterImage(pixels=arr)


class DepthAwareStylizer(BaseEstimator, TransformerMixin):
    """Depth-controlled arbitrary style transfer as a transformer.

    Parameters
    ----------
    engine : Engine
        Loaded encoder/decoder pair.
    alpha : float, default 1.0
        Global stylization strength in [0, 1].
    depth_min, depth_max : float
        Shaping window applied to the depth mask.
    invert_depth : bool, default False
        Flip orientation so near pixels get more style.
    epsilon : float, default 1e-5
        Variance stabilizer in the renormalization step.
    """

    def __init__(
        self,
        engine: Engine = None,
        alpha: float = 1.0,
        depth_min: float = 0.0,
        depth_max: float = 1.0,
        invert_depth: bool = False,
        epsilon: float = 1e-5,
    ):
        self.engine = engine
        self.alpha = alpha
        self.depth_min = depth_min
        self.depth_max = depth_max
        self.invert_depth = invert_depth
        self.epsilon = epsilon

    def _params(self) -> StylizeParams:
        return StylizeParams(
            alpha=self.alpha,
            depth_controls=DepthControls(
                dmin=self.depth_min, dmax=self.depth_max, invert=self.invert_depth
            ),
            epsilon=self.epsilon,
        )

    def fit(self, X, y=None, style_weights=None):
        """Compute the mixed style summary from style images `X`."""
        if self.engine is None:
            raise InvalidInputError("engine must be set before fitting")
        styles = [_as_raster(x) for x in X]
        if not styles:
            raise InvalidInputError("need at least one style image")
        summaries = [self.engine.style_summary(s) for s in styles]
        if style_weights is None:
            style_weights = np.full(len(summaries), 1.0 / len(summaries))
        self.style_summary_ = mix_styles(summaries, style_weights)
        return self

    def transform(self, X, depth=None):
        """Stylize content images; `depth` is an optional parallel list of maps."""
        if not hasattr(self, "style_summary_"):
            raise InvalidInputError("fit must be called before transform")
        params = self._params()
        depths = depth if depth is not None else [None] * len(X)
        if len(depths) != len(X):
            raise InvalidInputError("depth list length must match content list")
        out = []
        for item, d in zip(X, depths):
            content = _as_raster(item)
            if d is not None and np.asarray(d).shape != (content.height, content.width):
                raise InvalidInputError(
                    "depth map dims must match the paired content image"
                )
            padded, dims = pad_to_multiple(to_tensor(content), SPATIAL_MULTIPLE)
            features = self.engine.encode(padded)
            styled = adain(features, self.style_summary_, epsilon=params.epsilon)
            m = effective_mask(features.shape[1:], params, depth=d)
            blended = blend_features(features, styled, m)
            result = from_tensor(crop_to(self.engine.decode(blended), dims))
            out.append(result.pixels)
        return out
