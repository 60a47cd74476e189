"""Forward-only CNN layers and the encoder/decoder network builders.

The encoder is the fully-convolutional VGG-19 prefix cut right after the
relu following conv4_1; the decoder mirrors it, with each 2x2 max-pool
replaced by a x2 nearest-neighbor upsample and no relu after the last conv.

All 3x3 convolutions use reflection padding of width 1 (stride 1), so the
pretrained decoder weights this engine imports behave as trained and spatial
size is preserved layer to layer.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidInputError, WeightFormatError
from .tensor import Tensor3, as_tensor3
from .weights import WeightStore

# ---------------------------------------------------------------------------
# Layers


@dataclass(frozen=True)
class ConvSpec:
    """3x3 stride-1 convolution with reflection padding of width 1."""

    in_channels: int
    out_channels: int
    weights: np.ndarray  # (out, in, 3, 3) float32
    bias: np.ndarray     # (out,) float32
    name: str = ""

    def __post_init__(self):
        expected = (self.out_channels, self.in_channels, 3, 3)
        if self.weights.shape != expected:
            raise InvalidInputError(
                f"conv {self.name!r}: weight shape {self.weights.shape} != {expected}"
            )
        if self.bias.shape != (self.out_channels,):
            raise InvalidInputError(
                f"conv {self.name!r}: bias shape {self.bias.shape} != ({self.out_channels},)"
            )


@dataclass(frozen=True)
class Conv:
    spec: ConvSpec


@dataclass(frozen=True)
class ReLU:
    pass


@dataclass(frozen=True)
class MaxPool2x2:
    pass


@dataclass(frozen=True)
class UpsampleNearest2x:
    pass


Layer = Conv | ReLU | MaxPool2x2 | UpsampleNearest2x


@dataclass(frozen=True)
class Network:
    layers: tuple[Layer, ...]
    name: str = ""


def conv2d_reflect(x: Tensor3, spec: ConvSpec) -> Tensor3:
    """Cross-correlate reflection-padded `x` with `spec`, preserving H and W.

    Uses a patch-matrix (im2col) inner product so the reduction runs as a
    single sgemm; the naive nested-loop reference in the test suite is the
    correctness anchor.
    """
    x = as_tensor3(x)
    if x.shape[0] != spec.in_channels:
        raise InvalidInputError(
            f"conv {spec.name!r}: input has {x.shape[0]} channels, "
            f"expected {spec.in_channels}"
        )
    _, h, w = x.shape
    if h < 2 or w < 2:
        raise InvalidInputError(
            f"conv {spec.name!r}: spatial extent {h}x{w} too small for "
            "reflection padding of width 1"
        )
    padded = np.pad(x, ((0, 0), (1, 1), (1, 1)), mode="reflect")
    patches = sliding_window_view(padded, (3, 3), axis=(1, 2))  # (C, H, W, 3, 3)
    cols = np.ascontiguousarray(patches).reshape(spec.in_channels, h * w, 9)
    out = np.tensordot(
        spec.weights.reshape(spec.out_channels, spec.in_channels, 9),
        cols,
        axes=([1, 2], [0, 2]),
    )
    out += spec.bias[:, None]
    return out.reshape(spec.out_channels, h, w).astype(np.float32, copy=False)


def relu(x: Tensor3) -> Tensor3:
    return np.maximum(as_tensor3(x), np.float32(0.0))


def maxpool2x2(x: Tensor3) -> Tensor3:
    x = as_tensor3(x)
    c, h, w = x.shape
    if h % 2 or w % 2:
        raise InvalidInputError(f"maxpool2x2 requires even dims, got {h}x{w}")
    return x.reshape(c, h // 2, 2, w // 2, 2).max(axis=(2, 4))


def upsample_nearest_2x(x: Tensor3) -> Tensor3:
    x = as_tensor3(x)
    return np.repeat(np.repeat(x, 2, axis=1), 2, axis=2)


def forward(net: Network, x: Tensor3) -> Tensor3:
    """Apply the network's layers in order."""
    out = as_tensor3(x)
    for layer in net.layers:
        if isinstance(layer, Conv):
            out = conv2d_reflect(out, layer.spec)
        elif isinstance(layer, ReLU):
            out = relu(out)
        elif isinstance(layer, MaxPool2x2):
            out = maxpool2x2(out)
        elif isinstance(layer, UpsampleNearest2x):
            out = upsample_nearest_2x(out)
        else:
            raise InvalidInputError(f"unknown layer type: {layer!r}")
    return out


# ---------------------------------------------------------------------------
# Fixed architecture tables and the checked-in manifest

# (token, name, in_channels, out_channels); relu is implied after each conv
# unless noted. The encoder has exactly 3 pools before the cut; the decoder
# mirrors them with 3 upsamples and ends in a bare conv.
ENCODER_ARCH: tuple = (
    ("conv", "conv1_1", 3, 64),
    ("conv", "conv1_2", 64, 64),
    ("pool",),
    ("conv", "conv2_1", 64, 128),
    ("conv", "conv2_2", 128, 128),
    ("pool",),
    ("conv", "conv3_1", 128, 256),
    ("conv", "conv3_2", 256, 256),
    ("conv", "conv3_3", 256, 256),
    ("conv", "conv3_4", 256, 256),
    ("pool",),
    ("conv", "conv4_1", 256, 512),
)

DECODER_ARCH: tuple = (
    ("conv", "dec4_1", 512, 256),
    ("up",),
    ("conv", "dec3_4", 256, 256),
    ("conv", "dec3_3", 256, 256),
    ("conv", "dec3_2", 256, 256),
    ("conv", "dec3_1", 256, 128),
    ("up",),
    ("conv", "dec2_2", 128, 128),
    ("conv", "dec2_1", 128, 64),
    ("up",),
    ("conv", "dec1_2", 64, 64),
    ("conv", "dec1_1", 64, 3),  # no relu after the final conv
)

ENCODER_OUT_CHANNELS = 512
PIXEL_RANGE = "0..1"  # engine convention; weight manifests must agree


@dataclass(frozen=True)
class Manifest:
    """Pinned tensor names/shapes a weight file must satisfy."""

    role: str
    pixel_range: str
    shapes: dict[str, tuple[int, ...]] = field(hash=False)


def _arch_shapes(arch) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {}
    for entry in arch:
        if entry[0] == "conv":
            _, name, cin, cout = entry
            shapes[f"{name}.weight"] = (cout, cin, 3, 3)
            shapes[f"{name}.bias"] = (cout,)
    return shapes


def load_manifest(role: str) -> Manifest:
    """Parse the checked-in manifest text file for 'encoder' or 'decoder'."""
    if role not in ("encoder", "decoder"):
        raise InvalidInputError(f"unknown manifest role: {role!r}")
    text = (
        importlib.resources.files("depthstyle")
        .joinpath("data", f"{role}_manifest.txt")
        .read_text(encoding="utf-8")
    )
    pixel_range = None
    shapes: dict[str, tuple[int, ...]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            key, _, value = line[1:].partition(" ")
            if key == "pixel_range":
                pixel_range = value.strip()
            continue
        name, *dims = line.split()
        shapes[name] = tuple(int(d) for d in dims)
    if pixel_range != PIXEL_RANGE:
        raise WeightFormatError(
            f"{role} manifest pixel_range {pixel_range!r} does not match "
            f"the engine convention {PIXEL_RANGE!r}"
        )
    return Manifest(role=role, pixel_range=pixel_range, shapes=shapes)


def validate_store(store: WeightStore, manifest: Manifest) -> None:
    """Fail fast if `store` does not match the manifest exactly."""
    for name, shape in manifest.shapes.items():
        if name not in store:
            raise WeightFormatError(
                f"{manifest.role} weights missing tensor {name!r}"
            )
        actual = store.get(name).shape
        if actual != shape:
            raise WeightFormatError(
                f"{manifest.role} tensor {name!r} has shape {actual}, "
                f"manifest requires {shape}"
            )
    extra = set(store.names()) - set(manifest.shapes)
    if extra:
        raise WeightFormatError(
            f"{manifest.role} weights contain unexpected tensors: {sorted(extra)}"
        )


def _build(store: WeightStore, arch, role: str, final_relu: bool) -> Network:
    validate_store(store, load_manifest(role))
    layers: list[Layer] = []
    for entry in arch:
        if entry[0] == "conv":
            _, name, cin, cout = entry
            spec = ConvSpec(
                in_channels=cin,
                out_channels=cout,
                weights=store.get(f"{name}.weight"),
                bias=store.get(f"{name}.bias"),
                name=name,
            )
            layers.append(Conv(spec))
            layers.append(ReLU())
        elif entry[0] == "pool":
            layers.append(MaxPool2x2())
        elif entry[0] == "up":
            layers.append(UpsampleNearest2x())
    if not final_relu:
        layers.pop()
    return Network(layers=tuple(layers), name=role)


def build_encoder(store: WeightStore) -> Network:
    """VGG-19 prefix: conv/relu blocks with 3 max-pools, cut after relu4_1."""
    return _build(store, ENCODER_ARCH, "encoder", final_relu=True)


def build_decoder(store: WeightStore) -> Network:
    """Mirror of the encoder: upsamples for pools, bare conv at the end."""
    return _build(store, DECODER_ARCH, "decoder", final_relu=False)
