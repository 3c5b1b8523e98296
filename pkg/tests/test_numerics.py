import numpy as np
import pytest

from ccafusion.errors import ContractError, DimensionError
from ccafusion.numerics import RandomStream, center, covariance, inv_sqrt_sym, svd


class TestCenter:
    def test_hand_pair(self):
        out, means = center([[1, 3], [3, 5]])
        np.testing.assert_allclose(out, [[-1, -1], [1, 1]])
        np.testing.assert_allclose(means, [2, 4])

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(17, 3))
        once, _ = center(X)
        twice, means2 = center(once)
        np.testing.assert_allclose(twice, once, atol=1e-12)
        np.testing.assert_allclose(means2, np.zeros(3), atol=1e-12)

    def test_random_columns_zero_mean(self):
        rng = np.random.default_rng(1)
        X = rng.normal(5.0, 2.0, size=(50, 4))
        out, _ = center(X)
        assert np.abs(out.mean(axis=0)).max() < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(DimensionError):
            center(np.empty((0, 3)))

    def test_nan_rejected(self):
        with pytest.raises(ContractError):
            center([[1.0, np.nan]])


class TestCovariance:
    def test_variance_of_pm_one(self):
        A = np.array([[-1.0], [1.0]])
        np.testing.assert_allclose(covariance(A, A, 0.0), [[2.0]])

    def test_additive_ridge(self):
        A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        raw = covariance(A, A, 0.0)
        ridged = covariance(A, A, 1e-8)
        np.testing.assert_allclose(np.diag(ridged) - np.diag(raw), 1e-8)
        np.testing.assert_allclose(ridged - np.diag(np.diag(ridged)), raw - np.diag(np.diag(raw)))

    def test_matches_outer_product_oracle(self):
        rng = np.random.default_rng(2)
        A = rng.normal(size=(13, 3))
        B = rng.normal(size=(13, 4))
        acc = np.zeros((3, 4))
        for i in range(13):
            acc += np.outer(A[i], B[i])
        np.testing.assert_allclose(covariance(A, B), acc / 12, atol=1e-10)

    def test_row_mismatch(self):
        with pytest.raises(DimensionError):
            covariance(np.zeros((3, 2)), np.zeros((4, 2)))

    def test_self_cov_psd(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            A = rng.normal(size=(8, 5))
            A = A - A.mean(axis=0)
            w = np.linalg.eigvalsh(covariance(A, A, 0.0))
            assert w.min() >= -1e-10


class TestInvSqrtSym:
    def test_identity(self):
        np.testing.assert_allclose(inv_sqrt_sym(np.eye(3)), np.eye(3), atol=1e-12)

    def test_diagonal(self):
        R = inv_sqrt_sym(np.diag([4.0, 9.0]))
        np.testing.assert_allclose(R, np.diag([0.5, 1.0 / 3.0]), atol=1e-12)

    def test_random_spd_reconstruction(self):
        rng = np.random.default_rng(4)
        A = rng.normal(size=(5, 5))
        M = A @ A.T + 0.5 * np.eye(5)
        R = inv_sqrt_sym(M)
        assert np.linalg.norm(R @ M @ R - np.eye(5)) < 1e-6
        assert np.abs(R - R.T).max() < 1e-9

    def test_floor_clamps(self):
        M = np.diag([1.0, 1e-14])
        R = inv_sqrt_sym(M, floor=1e-10)
        assert np.isfinite(R).all()
        np.testing.assert_allclose(R[1, 1], 1e5)

    def test_non_symmetric_rejected(self):
        with pytest.raises(ContractError):
            inv_sqrt_sym([[1.0, 0.5], [0.0, 1.0]])


class TestSvd:
    def test_diag(self):
        _, s, _ = svd(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(s, [3.0, 2.0])

    def test_rank_one(self):
        u = np.array([1.0, -2.0, 0.5])
        v = np.array([0.3, 1.2])
        _, s, _ = svd(np.outer(u, v))
        assert (s > 1e-10).sum() == 1

    def test_reconstruction(self):
        rng = np.random.default_rng(5)
        M = rng.normal(size=(6, 4))
        U, s, V = svd(M)
        assert np.linalg.norm(U @ np.diag(s) @ V.T - M) < 1e-8
        assert np.all(s[:-1] >= s[1:]) and np.all(s >= 0)

    def test_sign_convention(self):
        rng = np.random.default_rng(6)
        M = rng.normal(size=(5, 5))
        U, _, _ = svd(M)
        for j in range(U.shape[1]):
            col = U[:, j]
            nz = np.nonzero(np.abs(col) > 1e-12)[0]
            assert col[nz[0]] >= 0


class TestRandomStream:
    def test_same_key_same_draws(self):
        a = RandomStream(123).substream(4, 2).generator().normal(size=10)
        b = RandomStream(123).substream(4, 2).generator().normal(size=10)
        np.testing.assert_array_equal(a, b)

    def test_distinct_substreams_differ(self):
        root = RandomStream(123)
        a = root.substream(0).generator().normal(size=10)
        b = root.substream(1).generator().normal(size=10)
        assert not np.array_equal(a, b)
