"""Deterministic numeric substrate: centering, regularized covariance,
symmetric inverse square root, sign-fixed SVD, and seeded random streams.

Every model in the package builds on these primitives, so they pin down the
conventions once: N-1 covariance divisor, eigenvalue flooring instead of
failure on near-singular matrices, and a deterministic SVD sign so that
downstream gradients and reports are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DimensionError

DEFAULT_EIG_FLOOR = 1e-10


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Validate `x` as a 2-D float matrix with finite entries and both dims >= 1."""
    m = np.asarray(x, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} needs at least one row and one column, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractError(f"{name} contains NaN or Inf entries")
    return m


@dataclass(frozen=True)
class RandomStream:
    """Seeded random stream with derivable substreams.

    The same (seed, key) produces the identical draw sequence on every platform
    and run. Substreams derived with distinct keys are statistically independent;
    one stream per worker, never shared.
    """

    seed: int
    key: tuple[int, ...] = ()

    def substream(self, *ids: int) -> "RandomStream":
        return RandomStream(int(self.seed), self.key + tuple(int(i) for i in ids))

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(int(self.seed), spawn_key=self.key))


def center(X) -> tuple[np.ndarray, np.ndarray]:
    """Remove column means. Returns (centered matrix, removed mean vector)."""
    X = as_matrix(X, "X")
    means = X.mean(axis=0)
    return X - means, means


def covariance(A, B, reg: float = 0.0) -> np.ndarray:
    """(1/(N-1)) A'B, plus reg*I on the diagonal when A and B are the same operand.

    The ridge is a self-covariance regularizer only; cross-covariance calls
    pass distinct operands and the reg argument is ignored for them.
    """
    same = A is B
    A = as_matrix(A, "A")
    B = A if same else as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"row counts differ: {A.shape[0]} vs {B.shape[0]}")
    if A.shape[0] < 2:
        raise DimensionError("covariance needs at least 2 rows")
    if reg < 0:
        raise ContractError(f"reg must be nonnegative, got {reg}")
    C = (A.T @ B) / (A.shape[0] - 1)
    if same and reg > 0:
        C = C + reg * np.eye(A.shape[1])
    return C


def inv_sqrt_sym(M, floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """Symmetric inverse square root via eigendecomposition.

    Eigenvalues below `floor` are clamped to `floor` before inversion, so
    degenerate inputs (rank-deficient minibatch covariances) stay finite
    instead of blowing up.
    """
    M = as_matrix(M, "M")
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"M must be square, got {M.shape}")
    if floor <= 0:
        raise ContractError(f"floor must be positive, got {floor}")
    scale = max(1.0, float(np.abs(M).max()))
    if np.abs(M - M.T).max() > 1e-9 * scale:
        raise ContractError("M is not symmetric within 1e-9")
    w, V = np.linalg.eigh((M + M.T) / 2.0)
    w = np.maximum(w, floor)
    R = (V / np.sqrt(w)) @ V.T
    return (R + R.T) / 2.0


def svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD with a deterministic sign convention.

    Returns (U, s, V) with U @ diag(s) @ V.T == M, singular values sorted
    descending. The first nonzero entry of each left singular vector is made
    nonnegative (SVD signs are otherwise arbitrary, which would make gradients
    and reports run-dependent).
    """
    M = as_matrix(M, "M")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    V = Vt.T
    for j in range(U.shape[1]):
        col = U[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12 * max(1.0, np.abs(col).max()))[0]
        if nz.size and col[nz[0]] < 0:
            U[:, j] = -U[:, j]
            V[:, j] = -V[:, j]
    return U, s, V
