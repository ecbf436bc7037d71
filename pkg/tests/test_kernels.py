import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locmom import (
    ConditionSeries,
    KernelFamily,
    KernelSpec,
    kernel_eval,
    normalized_weights,
    product_kernel,
)

FAMILIES = [KernelFamily.GAUSSIAN, KernelFamily.EPANECHNIKOV, KernelFamily.RECTANGULAR]


class TestKernelEval:
    def test_gaussian_values(self):
        assert kernel_eval("gaussian", 0.0, 0.5) == 1.0
        assert kernel_eval("gaussian", 0.5, 0.5) == pytest.approx(math.exp(-0.5))
        assert kernel_eval("gaussian", -0.5, 0.5) == pytest.approx(math.exp(-0.5))

    def test_epanechnikov_values(self):
        assert kernel_eval("epanechnikov", 0.0, 0.5) == 1.0
        assert kernel_eval("epanechnikov", 0.25, 0.5) == pytest.approx(0.75)
        assert kernel_eval("epanechnikov", 0.5, 0.5) == 0.0
        assert kernel_eval("epanechnikov", 0.6, 0.5) == 0.0

    def test_rectangular_values(self):
        assert kernel_eval("rectangular", 0.3, 0.5) == 1.0
        assert kernel_eval("rectangular", 0.5, 0.5) == 1.0  # boundary inclusive
        assert kernel_eval("rectangular", 0.6, 0.5) == 0.0

    def test_vectorized(self):
        out = kernel_eval("rectangular", np.array([0.0, 0.4, 0.9]), 0.5)
        assert np.array_equal(out, [1.0, 1.0, 0.0])

    @pytest.mark.parametrize("h", [0.0, -1.0])
    def test_nonpositive_bandwidth_rejected(self, h):
        with pytest.raises(ValueError):
            kernel_eval("gaussian", 0.0, h)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            kernel_eval("triangular", 0.0, 1.0)

    @pytest.mark.parametrize("family", FAMILIES)
    @given(x=st.floats(-10, 10), h=st.floats(0.01, 10))
    @settings(deadline=None)
    def test_symmetry_and_bounds(self, family, x, h):
        left = kernel_eval(family, -x, h)
        right = kernel_eval(family, x, h)
        assert left == pytest.approx(right, abs=1e-12)
        assert 0.0 <= right <= 1.0

    @pytest.mark.parametrize("family", [KernelFamily.EPANECHNIKOV, KernelFamily.RECTANGULAR])
    @given(x=st.floats(-100, 100), h=st.floats(0.01, 10))
    @settings(deadline=None)
    def test_compact_support(self, family, x, h):
        val = kernel_eval(family, x, h)
        if abs(x) > h:
            assert val == 0.0
        else:
            assert val >= 0.0

    @pytest.mark.parametrize("family", FAMILIES)
    @given(h=st.floats(0.01, 10), scale=st.floats(0.1, 10))
    @settings(deadline=None)
    def test_scale_invariance(self, family, h, scale):
        """Rescaling offset and bandwidth together leaves the value unchanged."""
        # stay away from the exact support boundary, where rounding of the
        # rescaled offsets can flip inclusion
        xs = h * np.linspace(-1.9, 1.9, 9)
        a = kernel_eval(family, xs, h)
        b = kernel_eval(family, xs * scale, h * scale)
        assert np.allclose(a, b, atol=1e-12)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_monotone_in_distance(self, family):
        xs = np.linspace(0.0, 0.99, 50)
        vals = kernel_eval(family, xs, 1.0)
        assert np.all(np.diff(vals) <= 1e-15)


class TestKernelSpec:
    def test_dim(self):
        spec = KernelSpec(families=("gaussian", "rectangular"), bandwidths=(0.5, 2.0))
        assert spec.dim == 2

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            KernelSpec(families=("gaussian",), bandwidths=(0.5, 1.0))

    def test_nonpositive_bandwidth_rejected(self):
        with pytest.raises(ValueError):
            KernelSpec(families=("gaussian",), bandwidths=(0.0,))


class TestProductKernel:
    def test_single_dimension_matches_eval(self):
        spec = KernelSpec(families=("gaussian",), bandwidths=(0.5,))
        assert product_kernel(spec, [0.5]) == pytest.approx(kernel_eval("gaussian", 0.5, 0.5))

    def test_two_dimensions(self):
        spec = KernelSpec(families=("gaussian", "rectangular"), bandwidths=(0.5, 1.0))
        expected = math.exp(-0.5) * 1.0
        assert product_kernel(spec, [0.5, 0.9]) == pytest.approx(expected)
        assert product_kernel(spec, [0.5, 1.1]) == 0.0

    def test_batch_shape(self):
        spec = KernelSpec(families=("gaussian", "gaussian"), bandwidths=(1.0, 1.0))
        out = product_kernel(spec, np.zeros((7, 2)))
        assert out.shape == (7,)
        assert np.allclose(out, 1.0)

    def test_dimension_mismatch_rejected(self):
        spec = KernelSpec(families=("gaussian",), bandwidths=(1.0,))
        with pytest.raises(ValueError):
            product_kernel(spec, [0.1, 0.2])


class TestNormalizedWeights:
    def test_two_point_gaussian(self):
        conds = ConditionSeries(columns=np.array([0.0, 0.5]))
        spec = KernelSpec(families=("gaussian",), bandwidths=(0.5,))
        w = normalized_weights(spec, conds, [0.0])
        raw = np.array([1.0, math.exp(-0.5)])
        assert np.allclose(w.weights, raw / raw.sum())
        assert w.total_raw == pytest.approx(raw.sum())
        assert not w.empty

    def test_rectangular_support_cut(self):
        conds = ConditionSeries(columns=np.array([0.0, 0.5, 2.0]))
        spec = KernelSpec(families=("rectangular",), bandwidths=(1.0,))
        w = normalized_weights(spec, conds, [0.0])
        assert np.array_equal(w.weights, [0.5, 0.5, 0.0])

    def test_missing_sample_gets_zero_weight(self):
        conds = ConditionSeries(
            columns=np.array([0.0, 0.1, 0.2]), missing=np.array([False, True, False])
        )
        spec = KernelSpec(families=("gaussian",), bandwidths=(1.0,))
        w = normalized_weights(spec, conds, [0.0])
        assert w.weights[1] == 0.0
        assert w.weights.sum() == pytest.approx(1.0)

    def test_empty_support(self):
        conds = ConditionSeries(columns=np.array([5.0, 6.0]))
        spec = KernelSpec(families=("rectangular",), bandwidths=(0.5,))
        w = normalized_weights(spec, conds, [0.0])
        assert w.empty
        assert np.array_equal(w.weights, np.zeros(2))

    def test_grid_point_dimension_checked(self):
        conds = ConditionSeries(columns=np.zeros((4, 2)))
        spec = KernelSpec(families=("gaussian", "gaussian"), bandwidths=(1.0, 1.0))
        with pytest.raises(ValueError):
            normalized_weights(spec, conds, [0.0])

    @given(seed=st.integers(0, 1000))
    @settings(deadline=None, max_examples=25)
    def test_normalization(self, seed):
        rng = np.random.default_rng(seed)
        conds = ConditionSeries(columns=rng.normal(size=40))
        spec = KernelSpec(families=("gaussian",), bandwidths=(0.7,))
        w = normalized_weights(spec, conds, [float(rng.normal())])
        assert abs(w.weights.sum() - 1.0) < 1e-12

    def test_translation_invariance(self):
        rng = np.random.default_rng(4)
        cols = rng.normal(size=30)
        spec = KernelSpec(families=("epanechnikov",), bandwidths=(1.5,))
        a = normalized_weights(spec, ConditionSeries(columns=cols), [0.3])
        b = normalized_weights(spec, ConditionSeries(columns=cols + 10.0), [10.3])
        assert np.allclose(a.weights, b.weights, atol=1e-12)
