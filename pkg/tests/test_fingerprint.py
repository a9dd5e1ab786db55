import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from morphboost.data import Dataset
from morphboost.fingerprint import (
    FAST_INTERACTION_STRENGTH,
    FAST_NOISE_LEVEL,
    FAST_NON_LINEARITY,
    complexity,
    derive_depth,
    fingerprint_dataset,
    interaction_strength,
    noise_level,
    non_linearity,
)


def one_feature(values, target=None):
    values = np.asarray(values, dtype=float)
    if target is None:
        target = np.arange(values.size, dtype=float)
    return Dataset(values.reshape(-1, 1), target)


class TestComplexity:
    def test_constant_feature_contributes_zero(self):
        assert complexity(one_feature([5.0] * 8)) == 0.0

    def test_balanced_binary_feature_is_half(self):
        values = np.tile([0.0, 1.0], 50)
        # oracle: population std of a fair coin is 0.5 over range 1
        expected = np.std(values) / (values.max() - values.min() + 1e-10)
        assert complexity(one_feature(values)) == pytest.approx(expected, rel=1e-12)
        assert complexity(one_feature(values)) == pytest.approx(0.5, rel=1e-6)

    def test_mean_over_features(self):
        X = np.column_stack([np.tile([0.0, 1.0], 10), np.full(20, 3.0)])
        data = Dataset(X, np.arange(20, dtype=float))
        assert complexity(data) == pytest.approx(0.25, rel=1e-6)

    @given(st.floats(-1e6, 1e6))
    def test_translation_invariance(self, shift):
        base = np.linspace(0.0, 2.0, 16)
        a = complexity(one_feature(base))
        b = complexity(one_feature(base + shift))
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)

    def test_feature_permutation_invariance(self, rng):
        X = rng.standard_normal((30, 4))
        y = np.arange(30, dtype=float)
        a = complexity(Dataset(X, y))
        b = complexity(Dataset(X[:, ::-1], y))
        assert a == pytest.approx(b, rel=1e-12)


class TestNonLinearity:
    def test_perfect_linear_gives_zero(self):
        x = np.linspace(-1, 1, 20)
        assert non_linearity(Dataset(x.reshape(-1, 1), x), seed=0) == 0.0

    def test_pure_quadratic_gives_one(self):
        x = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        data = Dataset(x.reshape(-1, 1), x * x)
        assert non_linearity(data, seed=0) == pytest.approx(1.0, abs=1e-9)

    def test_zero_variance_features_skipped(self):
        X = np.column_stack([np.full(10, 2.0), np.linspace(0, 1, 10)])
        data = Dataset(X, np.linspace(0, 1, 10))
        assert non_linearity(data, seed=0) == 0.0

    def test_deterministic_given_seed(self, rng):
        X = rng.standard_normal((50, 30))
        y = rng.standard_normal(50)
        data = Dataset(X, y)
        assert non_linearity(data, seed=9) == non_linearity(data, seed=9)


class TestInteractionStrength:
    def test_product_signal_detected(self):
        # XOR-like grid: y = x0 * x1, marginals uncorrelated with y
        grid = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]])
        X = np.tile(grid, (10, 1))
        y = X[:, 0] * X[:, 1]
        value = interaction_strength(Dataset(X, y), seed=0)
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_single_feature_returns_zero(self):
        data = Dataset(np.linspace(0, 1, 12).reshape(-1, 1), np.arange(12, dtype=float))
        assert interaction_strength(data, seed=0) == 0.0

    def test_deterministic_given_seed(self, rng):
        X = rng.standard_normal((40, 20))
        y = rng.standard_normal(40)
        data = Dataset(X, y)
        assert interaction_strength(data, seed=4) == interaction_strength(data, seed=4)


class TestNoiseLevel:
    def test_strong_signal_low_noise(self):
        x = np.linspace(0, 1, 30)
        assert noise_level(Dataset(x.reshape(-1, 1), x), seed=0) == pytest.approx(0.0, abs=1e-9)

    def test_pure_noise_high(self, rng):
        X = rng.standard_normal((200, 3))
        y = rng.standard_normal(200)
        assert noise_level(Dataset(X, y), seed=0) > 0.7


class TestDeriveDepth:
    def test_fast_mode_pins_eight(self):
        assert derive_depth(0.0, fast_mode=True) == 8
        assert derive_depth(10.0, fast_mode=True) == 8

    def test_high_complexity_hits_ten(self):
        assert derive_depth(0.5, fast_mode=False) == 10
        assert derive_depth(2.0, fast_mode=False) == 10

    def test_override_wins(self):
        assert derive_depth(2.0, fast_mode=True, override=3) == 3
        assert derive_depth(0.0, fast_mode=False, override=6) == 6

    def test_monotone_in_complexity(self):
        values = [derive_depth(c, fast_mode=False) for c in np.linspace(0, 1, 50)]
        assert values == sorted(values)
        assert min(values) >= 3 and max(values) <= 10


class TestFingerprintDataset:
    def test_fast_mode_constants(self, rng):
        X = rng.standard_normal((100, 5))
        y = (X[:, 0] > 0).astype(float)
        fp = fingerprint_dataset(Dataset(X, y), fast_mode=True, seed=0)
        assert fp.non_linearity == FAST_NON_LINEARITY
        assert fp.interaction_strength == FAST_INTERACTION_STRENGTH
        assert fp.noise_level == FAST_NOISE_LEVEL
        assert fp.effective_max_depth == 8
        assert fp.task.kind == "binary"

    def test_standard_mode_scalars_finite_and_bounded(self, rng):
        X = rng.standard_normal((80, 12))
        y = rng.standard_normal(80)
        fp = fingerprint_dataset(Dataset(X, y), fast_mode=False, seed=1)
        for value in (fp.complexity, fp.non_linearity, fp.interaction_strength, fp.noise_level):
            assert np.isfinite(value)
        assert 0.0 <= fp.non_linearity <= 1.0
        assert 0.0 <= fp.interaction_strength <= 1.0
        assert 0.0 <= fp.noise_level <= 1.0
        assert 1 <= fp.effective_max_depth <= 10
