"""Classical linear canonical correlation analysis.

Fits paired projection matrices that maximize the correlation between two
views, via the whitened cross-covariance T = S11^{-1/2} S12 S22^{-1/2} whose
singular values are the canonical correlations. Successive-projection
orthogonality falls out of the SVD construction, no deflation needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError
from .numerics import RandomStream, as_matrix, center, covariance, inv_sqrt_sym, svd

DEFAULT_REG = 1e-8


@dataclass
class CcaModel:
    """Fitted CCA: projections A1 (d1 x k), A2 (d2 x k), correlations, centering means."""

    A1: np.ndarray
    A2: np.ndarray
    correlations: np.ndarray
    means1: np.ndarray
    means2: np.ndarray
    reg: float

    @property
    def k(self) -> int:
        return self.A1.shape[1]


def fit(X1, X2, k: int, reg: float = DEFAULT_REG) -> CcaModel:
    """Fit CCA on two views with the same row count.

    The top-k singular values of the whitened cross-covariance are the
    canonical correlations; the projections are the whitening matrices times
    the corresponding singular vectors.
    """
    X1 = as_matrix(X1, "X1")
    X2 = as_matrix(X2, "X2")
    if X1.shape[0] != X2.shape[0]:
        raise DimensionError(f"row counts differ: {X1.shape[0]} vs {X2.shape[0]}")
    if X1.shape[0] < 2:
        raise DimensionError("fit needs at least 2 samples")
    d1, d2 = X1.shape[1], X2.shape[1]
    if not 1 <= k <= min(d1, d2):
        raise ParameterError(f"k={k} must be in [1, min(d1={d1}, d2={d2})]")
    if reg < 0:
        raise ParameterError(f"reg must be nonnegative, got {reg}")

    H1, means1 = center(X1)
    H2, means2 = center(X2)
    S11 = covariance(H1, H1, reg)
    S22 = covariance(H2, H2, reg)
    S12 = covariance(H1, H2)
    K1 = inv_sqrt_sym(S11)
    K2 = inv_sqrt_sym(S22)
    U, s, V = svd(K1 @ S12 @ K2)
    return CcaModel(
        A1=K1 @ U[:, :k],
        A2=K2 @ V[:, :k],
        correlations=np.clip(s[:k], 0.0, None),
        means1=means1,
        means2=means2,
        reg=float(reg),
    )


def transform(model: CcaModel, X1, X2) -> tuple[np.ndarray, np.ndarray]:
    """Project both views into the shared k-dimensional canonical space."""
    X1 = as_matrix(X1, "X1")
    X2 = as_matrix(X2, "X2")
    if X1.shape[1] != model.A1.shape[0]:
        raise DimensionError(f"X1 has {X1.shape[1]} cols, model expects {model.A1.shape[0]}")
    if X2.shape[1] != model.A2.shape[0]:
        raise DimensionError(f"X2 has {X2.shape[1]} cols, model expects {model.A2.shape[0]}")
    return (X1 - model.means1) @ model.A1, (X2 - model.means2) @ model.A2


def total_correlation(model: CcaModel) -> float:
    """Sum of the fitted canonical correlations."""
    return float(model.correlations.sum())


def planted_cca_data(
    stream: RandomStream,
    corrs,
    d1: int,
    d2: int,
    N: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Generate two views whose population canonical correlations equal `corrs`.

    Each target rho pairs one latent factor into both views with loading
    sqrt(rho), remaining dimensions are independent noise, and each view is
    rotated by a seeded orthogonal matrix (canonical correlations are
    rotation-invariant, so the targets survive the mixing).
    """
    corrs = np.asarray(list(corrs), dtype=float)
    if corrs.size > min(d1, d2):
        raise ParameterError(f"{corrs.size} targets exceed min(d1={d1}, d2={d2})")
    if corrs.size and (corrs.min() < 0.0 or corrs.max() >= 1.0):
        raise ParameterError("target correlations must lie in [0, 1)")
    if N < 2:
        raise ParameterError("N must be >= 2")

    rng = stream.generator()
    m = corrs.size
    Y1 = rng.standard_normal((N, d1))
    Y2 = rng.standard_normal((N, d2))
    if m:
        z = rng.standard_normal((N, m))
        Y1[:, :m] = np.sqrt(corrs) * z + np.sqrt(1.0 - corrs) * Y1[:, :m]
        Y2[:, :m] = np.sqrt(corrs) * z + np.sqrt(1.0 - corrs) * Y2[:, :m]
    Q1 = np.linalg.qr(rng.standard_normal((d1, d1)))[0]
    Q2 = np.linalg.qr(rng.standard_normal((d2, d2)))[0]
    return Y1 @ Q1, Y2 @ Q2
