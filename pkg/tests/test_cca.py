import numpy as np
import pytest

from ccafusion import cca
from ccafusion.errors import DimensionError, ParameterError
from ccafusion.numerics import RandomStream


def pearson(a, b):
    return np.corrcoef(a, b)[0, 1]


class TestFit:
    def test_identical_views_full_correlation(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(500, 4))
        model = cca.fit(X, X, k=4, reg=1e-8)
        np.testing.assert_allclose(model.correlations, np.ones(4), atol=1e-6)

    def test_independent_views_near_zero(self):
        rng = np.random.default_rng(11)
        X1 = rng.normal(size=(20000, 3))
        X2 = rng.normal(size=(20000, 3))
        model = cca.fit(X1, X2, k=3)
        assert model.correlations.max() < 0.05

    def test_one_dim_equals_pearson(self):
        rng = np.random.default_rng(12)
        x = rng.normal(size=300)
        y = 0.6 * x + rng.normal(size=300)
        model = cca.fit(x[:, None], y[:, None], k=1, reg=0.0)
        assert abs(model.correlations[0] - abs(pearson(x, y))) < 1e-9

    def test_k_too_large(self):
        with pytest.raises(ParameterError):
            cca.fit(np.zeros((10, 2)), np.zeros((10, 3)), k=3)

    def test_too_few_rows(self):
        with pytest.raises(DimensionError):
            cca.fit(np.zeros((1, 2)), np.zeros((1, 2)), k=1)

    def test_correlations_sorted_descending(self):
        X1, X2 = cca.planted_cca_data(RandomStream(5), [0.8, 0.4], 5, 4, 3000)
        model = cca.fit(X1, X2, k=4)
        assert np.all(np.diff(model.correlations) <= 1e-12)


class TestTransform:
    def test_projection_correlation_matches_model(self):
        X1, X2 = cca.planted_cca_data(RandomStream(6), [0.7], 3, 3, 5000)
        model = cca.fit(X1, X2, k=1)
        P1, P2 = cca.transform(model, X1, X2)
        assert abs(pearson(P1[:, 0], P2[:, 0]) - model.correlations[0]) < 1e-6

    def test_zero_variance_column_finite(self):
        rng = np.random.default_rng(13)
        X1 = rng.normal(size=(100, 3))
        X1[:, 1] = 2.5
        X2 = rng.normal(size=(100, 2))
        model = cca.fit(X1, X2, k=2, reg=1e-8)
        P1, P2 = cca.transform(model, X1, X2)
        assert np.isfinite(P1).all() and np.isfinite(P2).all()

    def test_unit_variance_projections(self):
        rng = np.random.default_rng(14)
        X1 = rng.normal(size=(400, 3))
        X2 = 0.5 * X1 + rng.normal(size=(400, 3))
        model = cca.fit(X1, X2, k=3, reg=0.0)
        P1, P2 = cca.transform(model, X1, X2)
        np.testing.assert_allclose(P1.var(axis=0, ddof=1), np.ones(3), atol=1e-6)
        np.testing.assert_allclose(P2.var(axis=0, ddof=1), np.ones(3), atol=1e-6)

    def test_dimension_mismatch(self):
        X1, X2 = cca.planted_cca_data(RandomStream(7), [0.5], 3, 2, 50)
        model = cca.fit(X1, X2, k=1)
        with pytest.raises(DimensionError):
            cca.transform(model, X2, X1)


class TestPlantedData:
    def test_recovers_targets(self):
        targets = [0.9, 0.5, 0.1]
        X1, X2 = cca.planted_cca_data(RandomStream(8), targets, 6, 5, 20000)
        model = cca.fit(X1, X2, k=3)
        np.testing.assert_allclose(model.correlations, targets, atol=0.03)

    def test_no_targets_independent(self):
        X1, X2 = cca.planted_cca_data(RandomStream(9), [], 3, 3, 20000)
        model = cca.fit(X1, X2, k=3)
        assert model.correlations.max() < 0.05

    def test_target_one_rejected(self):
        with pytest.raises(ParameterError):
            cca.planted_cca_data(RandomStream(10), [1.0], 3, 3, 100)

    def test_deterministic(self):
        A = cca.planted_cca_data(RandomStream(11), [0.5], 3, 3, 100)
        B = cca.planted_cca_data(RandomStream(11), [0.5], 3, 3, 100)
        np.testing.assert_array_equal(A[0], B[0])
        np.testing.assert_array_equal(A[1], B[1])


class TestInvariants:
    def test_scale_invariance(self):
        X1, X2 = cca.planted_cca_data(RandomStream(12), [0.6, 0.3], 4, 4, 2000)
        base = cca.fit(X1, X2, k=2, reg=0.0).correlations
        scaled = cca.fit(37.0 * X1, X2, k=2, reg=0.0).correlations
        np.testing.assert_allclose(scaled, base, atol=1e-6)

    def test_order_invariance(self):
        X1, X2 = cca.planted_cca_data(RandomStream(13), [0.6, 0.3], 4, 3, 2000)
        a = cca.fit(X1, X2, k=3).correlations
        b = cca.fit(X2, X1, k=3).correlations
        np.testing.assert_allclose(a, b, atol=1e-9)

    def test_reg_shrinks_correlations(self):
        X1, X2 = cca.planted_cca_data(RandomStream(14), [0.8, 0.4], 4, 4, 2000)
        loose = cca.fit(X1, X2, k=2, reg=0.0).correlations
        tight = cca.fit(X1, X2, k=2, reg=0.1).correlations
        assert np.all(tight <= loose + 1e-12)
