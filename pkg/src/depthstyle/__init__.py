"""Depth-aware arbitrary style transfer engine."""

from .adain import StyleSummary, adain, blend_global, blend_spatial, mix_styles
from .depth import DepthControls, load_depth, normalize_depth, resample_to, shape_mask
from .errors import (
    DegenerateDepthError,
    DepthStyleError,
    InvalidInputError,
    WeightFormatError,
)
from .estimator import DepthAwareStylizer
from .image_io import RasterImage, from_tensor, load_image, save_image, to_tensor
from .pipeline import Engine, StylizeParams, reconstruct, stylize
from .tensor import ChannelStats, channel_moments, elementwise_affine
from .weights import WeightStore, load_weights, save_weights

__version__ = "0.1.0"

__all__ = [
    "ChannelStats",
    "DegenerateDepthError",
    "DepthAwareStylizer",
    "DepthControls",
    "DepthStyleError",
    "Engine",
    "InvalidInputError",
    "RasterImage",
    "StyleSummary",
    "StylizeParams",
    "WeightFormatError",
    "WeightStore",
    "adain",
    "blend_global",
    "blend_spatial",
    "channel_moments",
    "elementwise_affine",
    "from_tensor",
    "load_depth",
    "load_image",
    "load_weights",
    "mix_styles",
    "normalize_depth",
    "reconstruct",
    "resample_to",
    "save_image",
    "save_weights",
    "shape_mask",
    "stylize",
    "to_tensor",
]
