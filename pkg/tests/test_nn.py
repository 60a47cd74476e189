import numpy as np
import pytest

from depthstyle import nn
from depthstyle.errors import InvalidInputError, WeightFormatError
from depthstyle.nn import (
    Conv,
    ConvSpec,
    MaxPool2x2,
    Network,
    ReLU,
    UpsampleNearest2x,
    build_decoder,
    build_encoder,
    conv2d_reflect,
    forward,
    load_manifest,
    maxpool2x2,
    relu,
    upsample_nearest_2x,
)
from depthstyle.weights import WeightStore

from oracles import conv2d_naive, maxpool_naive, synthetic_decoder_store, synthetic_encoder_store


def spec_of(weights, bias, name="t"):
    weights = np.asarray(weights, dtype=np.float32)
    return ConvSpec(
        in_channels=weights.shape[1],
        out_channels=weights.shape[0],
        weights=weights,
        bias=np.asarray(bias, dtype=np.float32),
        name=name,
    )


class TestConv2dReflect:
    def test_identity_kernel(self):
        w = np.zeros((1, 1, 3, 3))
        w[0, 0, 1, 1] = 1.0
        x = np.random.default_rng(0).normal(size=(1, 5, 7)).astype(np.float32)
        out = conv2d_reflect(x, spec_of(w, [0.0]))
        np.testing.assert_allclose(out, x, atol=1e-6)

    def test_constant_field_all_ones_kernel(self):
        # reflection padding replicates interior values, so every 3x3 sum is 9c
        x = np.full((1, 4, 4), 2.5, dtype=np.float32)
        out = conv2d_reflect(x, spec_of(np.ones((1, 1, 3, 3)), [0.0]))
        np.testing.assert_allclose(out, np.full((1, 4, 4), 22.5), rtol=1e-6)

    def test_against_naive_oracle(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(2, 5, 5)).astype(np.float32)
        w = rng.normal(size=(3, 2, 3, 3)).astype(np.float32)
        b = rng.normal(size=3).astype(np.float32)
        out = conv2d_reflect(x, spec_of(w, b))
        np.testing.assert_allclose(out, conv2d_naive(x, w, b), rtol=1e-5, atol=1e-5)

    def test_channel_mismatch_rejected(self):
        spec = spec_of(np.zeros((1, 2, 3, 3)), [0.0])
        with pytest.raises(InvalidInputError, match="channels"):
            conv2d_reflect(np.zeros((3, 4, 4), dtype=np.float32), spec)

    def test_one_pixel_extent_rejected(self):
        spec = spec_of(np.zeros((1, 1, 3, 3)), [0.0])
        with pytest.raises(InvalidInputError):
            conv2d_reflect(np.zeros((1, 1, 4), dtype=np.float32), spec)

    def test_bad_weight_shape_rejected(self):
        with pytest.raises(InvalidInputError):
            ConvSpec(1, 1, np.zeros((1, 1, 5, 5), dtype=np.float32),
                     np.zeros(1, dtype=np.float32))


class TestPointwiseLayers:
    def test_relu_all_negative(self):
        out = relu(np.full((2, 3, 3), -1.0, dtype=np.float32))
        np.testing.assert_array_equal(out, np.zeros((2, 3, 3)))

    def test_relu_all_positive_unchanged(self):
        x = np.abs(np.random.default_rng(1).normal(size=(2, 3, 3))).astype(np.float32)
        np.testing.assert_array_equal(relu(x), x)

    def test_relu_mixed_matches_scalar(self):
        x = np.random.default_rng(2).normal(size=(2, 4, 4)).astype(np.float32)
        expected = np.vectorize(lambda v: max(0.0, float(v)))(x)
        np.testing.assert_allclose(relu(x), expected, rtol=1e-7)

    def test_maxpool_2x2_block(self):
        out = maxpool2x2(np.asarray([1, 2, 3, 4], dtype=np.float32).reshape(1, 2, 2))
        np.testing.assert_array_equal(out, [[[4.0]]])

    def test_maxpool_constant(self):
        out = maxpool2x2(np.full((3, 6, 4), 1.5, dtype=np.float32))
        np.testing.assert_array_equal(out, np.full((3, 3, 2), 1.5))

    def test_maxpool_against_blockwise_oracle(self):
        x = np.random.default_rng(3).normal(size=(3, 8, 8)).astype(np.float32)
        np.testing.assert_array_equal(maxpool2x2(x), maxpool_naive(x))

    def test_maxpool_odd_dims_rejected(self):
        with pytest.raises(InvalidInputError, match="even"):
            maxpool2x2(np.zeros((1, 5, 4), dtype=np.float32))

    def test_upsample_single_pixel(self):
        out = upsample_nearest_2x(np.full((1, 1, 1), 7.0, dtype=np.float32))
        np.testing.assert_array_equal(out, np.full((1, 2, 2), 7.0))

    def test_upsample_blocks(self):
        x = np.asarray([1, 2, 3, 4], dtype=np.float32).reshape(1, 2, 2)
        out = upsample_nearest_2x(x)
        assert out.shape == (1, 4, 4)
        for i in range(4):
            for j in range(4):
                assert out[0, i, j] == x[0, i // 2, j // 2]

    def test_maxpool_inverts_upsample(self):
        x = np.random.default_rng(4).normal(size=(2, 3, 5)).astype(np.float32)
        np.testing.assert_array_equal(maxpool2x2(upsample_nearest_2x(x)), x)


class TestForward:
    def test_empty_network_is_identity(self):
        x = np.random.default_rng(5).normal(size=(2, 4, 4)).astype(np.float32)
        np.testing.assert_array_equal(forward(Network(layers=()), x), x)

    def test_single_relu(self):
        x = np.full((1, 2, 2), -3.0, dtype=np.float32)
        out = forward(Network(layers=(ReLU(),)), x)
        np.testing.assert_array_equal(out, np.zeros((1, 2, 2)))

    def test_encoder_reduces_by_8(self):
        encoder = build_encoder(synthetic_encoder_store())
        out = forward(encoder, np.random.default_rng(6)
                      .uniform(size=(3, 64, 64)).astype(np.float32))
        assert out.shape == (nn.ENCODER_OUT_CHANNELS, 8, 8)

    def test_decoder_expands_by_8(self):
        decoder = build_decoder(synthetic_decoder_store())
        out = forward(decoder, np.random.default_rng(7)
                      .normal(size=(512, 4, 4)).astype(np.float32))
        assert out.shape == (3, 32, 32)

    def test_outputs_stay_finite(self):
        encoder = build_encoder(synthetic_encoder_store())
        out = forward(encoder, np.random.default_rng(8)
                      .uniform(size=(3, 32, 32)).astype(np.float32))
        assert np.all(np.isfinite(out))


class TestBuilders:
    def test_encoder_layer_counts(self):
        encoder = build_encoder(synthetic_encoder_store())
        assert sum(isinstance(l, MaxPool2x2) for l in encoder.layers) == 3
        assert sum(isinstance(l, Conv) for l in encoder.layers) == 9
        assert isinstance(encoder.layers[-1], ReLU)  # cut right after relu4_1

    def test_decoder_layer_counts_and_bare_final_conv(self):
        decoder = build_decoder(synthetic_decoder_store())
        assert sum(isinstance(l, UpsampleNearest2x) for l in decoder.layers) == 3
        assert isinstance(decoder.layers[-1], Conv)

    def test_adjacent_convs_channel_compatible(self):
        for net in (build_encoder(synthetic_encoder_store()),
                    build_decoder(synthetic_decoder_store())):
            convs = [l.spec for l in net.layers if isinstance(l, Conv)]
            for a, b in zip(convs, convs[1:]):
                assert a.out_channels == b.in_channels

    def test_missing_tensor_named_in_error(self):
        store = synthetic_encoder_store()
        broken = WeightStore()
        for name, values in store.items():
            if name != "conv2_1.bias":
                broken.add(name, values)
        with pytest.raises(WeightFormatError, match="conv2_1.bias"):
            build_encoder(broken)

    def test_shape_mismatch_named_in_error(self):
        store = synthetic_encoder_store()
        broken = WeightStore()
        for name, values in store.items():
            if name == "conv1_1.weight":
                values = values[:, :, :2, :2]
            broken.add(name, values)
        with pytest.raises(WeightFormatError, match="conv1_1.weight"):
            build_encoder(broken)

    def test_unexpected_tensor_rejected(self):
        store = synthetic_encoder_store()
        store.add("stray", np.zeros(3, dtype=np.float32))
        with pytest.raises(WeightFormatError, match="stray"):
            build_encoder(store)


class TestManifest:
    def test_text_files_agree_with_architecture_tables(self):
        from depthstyle.nn import DECODER_ARCH, ENCODER_ARCH, _arch_shapes
        assert load_manifest("encoder").shapes == _arch_shapes(ENCODER_ARCH)
        assert load_manifest("decoder").shapes == _arch_shapes(DECODER_ARCH)

    def test_pixel_range_pinned(self):
        assert load_manifest("encoder").pixel_range == "0..1"
