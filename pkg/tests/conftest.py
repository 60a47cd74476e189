import numpy as np
import pytest

from depthstyle.nn import build_decoder, build_encoder
from depthstyle.image_io import RasterImage
from depthstyle.pipeline import Engine

from oracles import synthetic_decoder_store, synthetic_encoder_store


@pytest.fixture(scope="session")
def engine():
    """Full-architecture engine with seeded random weights."""
    return Engine(
        build_encoder(synthetic_encoder_store()),
        build_decoder(synthetic_decoder_store()),
    )


def random_image(rng, h, w) -> RasterImage:
    return RasterImage(pixels=rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
