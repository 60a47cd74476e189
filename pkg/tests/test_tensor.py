import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from depthstyle.errors import InvalidInputError
from depthstyle.tensor import channel_moments, elementwise_affine

from oracles import affine_naive


def t3(values, shape):
    return np.asarray(values, dtype=np.float32).reshape(shape)


class TestChannelMoments:
    def test_constant_channel(self):
        stats = channel_moments(np.full((1, 2, 2), 5.0, dtype=np.float32))
        assert stats.means[0] == pytest.approx(5.0)
        assert stats.stds[0] == pytest.approx(0.0)

    def test_hand_computed(self):
        # mean 2.5, population variance 1.25
        stats = channel_moments(t3([1, 2, 3, 4], (1, 2, 2)))
        assert stats.means[0] == pytest.approx(2.5)
        assert stats.stds[0] == pytest.approx(np.sqrt(1.25))

    def test_negated_channel(self):
        x = np.random.default_rng(0).normal(size=(1, 4, 4)).astype(np.float32)
        both = np.concatenate([x, -x])
        stats = channel_moments(both)
        assert stats.means[1] == pytest.approx(-stats.means[0])
        assert stats.stds[1] == pytest.approx(stats.stds[0])

    def test_population_not_sample_variance(self):
        x = t3([0.0, 2.0], (1, 1, 2))
        stats = channel_moments(x)
        assert stats.stds[0] == pytest.approx(1.0)  # /HW, not /(HW-1)

    def test_empty_tensor_rejected(self):
        with pytest.raises(InvalidInputError):
            channel_moments(np.zeros((1, 0, 4), dtype=np.float32))

    @given(arrays(np.float32, (2, 3, 5), elements=st.floats(-10, 10, width=32)),
           st.randoms(use_true_random=False))
    @settings(max_examples=30, deadline=None)
    def test_invariant_under_spatial_permutation(self, x, rand):
        flat = x.reshape(2, -1)
        perm = list(range(flat.shape[1]))
        rand.shuffle(perm)
        shuffled = flat[:, perm].reshape(x.shape)
        a, b = channel_moments(x), channel_moments(shuffled)
        np.testing.assert_allclose(a.means, b.means, atol=1e-6)
        np.testing.assert_allclose(a.stds, b.stds, atol=1e-6)


class TestElementwiseAffine:
    def test_identity(self):
        x = np.random.default_rng(1).normal(size=(3, 4, 4)).astype(np.float32)
        out = elementwise_affine(x, np.ones(3), np.zeros(3))
        np.testing.assert_array_equal(out, x)

    def test_constant_output(self):
        x = np.random.default_rng(2).normal(size=(2, 3, 3)).astype(np.float32)
        out = elementwise_affine(x, np.zeros(2), np.full(2, 7.5))
        np.testing.assert_array_equal(out, np.full((2, 3, 3), 7.5, dtype=np.float32))

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(3, 4, 4)).astype(np.float32)
        scale = rng.normal(size=3)
        shift = rng.normal(size=3)
        out = elementwise_affine(x, scale, shift)
        np.testing.assert_allclose(out, affine_naive(x, scale, shift), rtol=1e-5)

    def test_length_mismatch_rejected(self):
        x = np.zeros((3, 2, 2), dtype=np.float32)
        with pytest.raises(InvalidInputError):
            elementwise_affine(x, np.ones(2), np.zeros(3))

    @given(arrays(np.float32, (2, 4, 4), elements=st.floats(-5, 5, width=32)),
           st.lists(st.floats(-3, 3), min_size=2, max_size=2),
           st.lists(st.floats(-3, 3), min_size=2, max_size=2))
    @settings(max_examples=30, deadline=None)
    def test_moments_transform_affinely(self, x, scale, shift):
        before = channel_moments(x)
        after = channel_moments(elementwise_affine(x, scale, shift))
        expected_means = np.asarray(scale) * before.means + np.asarray(shift)
        expected_stds = np.abs(scale) * before.stds
        np.testing.assert_allclose(after.means, expected_means, rtol=1e-5, atol=1e-4)
        np.testing.assert_allclose(after.stds, expected_stds, rtol=1e-5, atol=1e-4)

    def test_preserves_shape(self):
        x = np.zeros((4, 5, 6), dtype=np.float32)
        assert elementwise_affine(x, np.ones(4), np.ones(4)).shape == (4, 5, 6)
