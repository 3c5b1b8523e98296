"""Deep CCA: two modality towers trained to maximize the canonical correlation
of their outputs, plus weighted-sum fusion of the transformed views.

The training objective is the nuclear norm of the whitened cross-covariance
T (sum of all d singular values); its analytic gradient with respect to the
tower outputs is computed from the SVD of T and checked against finite
differences in the test suite. The Frobenius norm of T is reported as a
secondary metric only by `frobenius_correlation`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError, TrainingError
from .neuralnet import LayerSpec, Network, OptimizerConfig, backward, forward, step
from .numerics import RandomStream, as_matrix, center, covariance, inv_sqrt_sym, svd

DEFAULT_REG = 1e-8


def cca_loss(O1, O2, reg: float = DEFAULT_REG) -> tuple[float, np.ndarray, np.ndarray]:
    """Total correlation of two N x d output batches and its gradients.

    Returns (corr, dcorr/dO1, dcorr/dO2) where corr is the sum of all d
    singular values of T = S11^{-1/2} S12 S22^{-1/2} computed on regularized
    batch covariances. Maximizing corr is the training objective; the loss fed
    to the optimizer is -corr.
    """
    O1 = as_matrix(O1, "O1")
    O2 = as_matrix(O2, "O2")
    if O1.shape != O2.shape:
        raise DimensionError(f"O1 {O1.shape} and O2 {O2.shape} must match")
    N, d = O1.shape
    if N < d + 2:
        raise TrainingError(f"batch of {N} rows cannot whiten {d}-dim outputs (need N >= d + 2)")

    H1, _ = center(O1)
    H2, _ = center(O2)
    S11 = covariance(H1, H1, reg)
    S22 = covariance(H2, H2, reg)
    S12 = covariance(H1, H2)
    K1 = inv_sqrt_sym(S11)
    K2 = inv_sqrt_sym(S22)
    U, D, V = svd(K1 @ S12 @ K2)
    if D.min() < 1e-12:
        warnings.warn("singular value collapsed below 1e-12 in cca_loss", RuntimeWarning)
    corr = float(D.sum())

    # Gradient of the nuclear norm of T through the whitening: with samples in
    # rows, grad11 = -1/2 K1 U diag(D) U' K1 and grad12 = K1 U V' K2, giving
    # dcorr/dO1 = (2 H1 grad11 + H2 grad12') / (N - 1); dO2 is symmetric.
    grad11 = -0.5 * K1 @ (U * D) @ U.T @ K1
    grad22 = -0.5 * K2 @ (V * D) @ V.T @ K2
    grad12 = K1 @ U @ V.T @ K2
    dO1 = (2.0 * H1 @ grad11 + H2 @ grad12.T) / (N - 1)
    dO2 = (2.0 * H2 @ grad22 + H1 @ grad12) / (N - 1)
    return corr, dO1, dO2


def frobenius_correlation(O1, O2, reg: float = DEFAULT_REG) -> float:
    """Frobenius norm of T, i.e. sqrt(tr(T'T)); secondary reporting metric."""
    O1 = as_matrix(O1, "O1")
    O2 = as_matrix(O2, "O2")
    H1, _ = center(O1)
    H2, _ = center(O2)
    K1 = inv_sqrt_sym(covariance(H1, H1, reg))
    K2 = inv_sqrt_sym(covariance(H2, H2, reg))
    T = K1 @ covariance(H1, H2) @ K2
    return float(np.sqrt((T * T).sum()))


@dataclass
class DccaConfig:
    """Tower shapes and training hyperparameters.

    hidden1/hidden2 list the hidden-layer widths of each tower; the output
    layer is identity-activated with out_dim units so that CCA whitening stays
    well-conditioned. Defaults follow the two-hidden-layer, 12-output shape
    used for five-emotion runs.
    """

    out_dim: int = 12
    hidden1: tuple[int, ...] = (120, 120)
    hidden2: tuple[int, ...] = (120, 120)
    hidden_activation: str = "sigmoid"
    reg: float = DEFAULT_REG
    epochs: int = 50
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def tower_specs(self, input_dim: int, which: int) -> list[LayerSpec]:
        hidden = self.hidden1 if which == 1 else self.hidden2
        dims = [input_dim, *hidden, self.out_dim]
        specs = [
            LayerSpec(a, b, self.hidden_activation) for a, b in zip(dims[:-2], dims[1:-1])
        ]
        specs.append(LayerSpec(dims[-2], dims[-1], "identity"))
        return specs


@dataclass
class DccaModel:
    tower1: Network
    tower2: Network
    out_dim: int
    alpha1: float
    reg: float
    training_curve: list[float]

    @property
    def alpha2(self) -> float:
        return 1.0 - self.alpha1


def train(X1, X2, cfg: DccaConfig, stream: RandomStream, alpha1: float = 0.5) -> DccaModel:
    """Train both towers by minibatch gradient ascent on the total correlation.

    The training curve records the full-training-set correlation after every
    epoch. Non-finite parameters abort with the offending epoch named.
    """
    X1 = as_matrix(X1, "X1")
    X2 = as_matrix(X2, "X2")
    if X1.shape[0] != X2.shape[0]:
        raise DimensionError(f"row counts differ: {X1.shape[0]} vs {X2.shape[0]}")
    if not 0.0 <= alpha1 <= 1.0:
        raise ParameterError(f"alpha1 must lie in [0, 1], got {alpha1}")
    N = X1.shape[0]
    batch = min(cfg.optimizer.batch_size, N)
    if batch < cfg.out_dim + 2:
        raise TrainingError(
            f"batch size {batch} too small for out_dim {cfg.out_dim} (need >= out_dim + 2)"
        )

    tower1 = Network(cfg.tower_specs(X1.shape[1], 1), stream.substream(1))
    tower2 = Network(cfg.tower_specs(X2.shape[1], 2), stream.substream(2))
    state1 = state2 = None
    order_rng = stream.substream(3).generator()

    curve: list[float] = []
    for epoch in range(cfg.epochs):
        perm = order_rng.permutation(N)
        for start in range(0, N - batch + 1, batch):
            idx = perm[start : start + batch]
            out1, tape1 = forward(tower1, X1[idx])
            out2, tape2 = forward(tower2, X2[idx])
            corr, dO1, dO2 = cca_loss(out1, out2, cfg.reg)
            if not np.isfinite(corr):
                raise TrainingError(f"non-finite correlation at epoch {epoch}")
            # loss = -corr, so descend along -dcorr
            state1 = step(tower1, backward(tower1, tape1, -dO1), cfg.optimizer, state1)
            state2 = step(tower2, backward(tower2, tape2, -dO2), cfg.optimizer, state2)
        for net in (tower1, tower2):
            if not all(np.all(np.isfinite(p)) for p in net.parameters()):
                raise TrainingError(f"tower parameters diverged at epoch {epoch}")
        full1, _ = forward(tower1, X1)
        full2, _ = forward(tower2, X2)
        epoch_corr, _, _ = cca_loss(full1, full2, cfg.reg)
        if not np.isfinite(epoch_corr):
            raise TrainingError(f"non-finite epoch correlation at epoch {epoch}")
        curve.append(epoch_corr)

    return DccaModel(
        tower1=tower1,
        tower2=tower2,
        out_dim=cfg.out_dim,
        alpha1=float(alpha1),
        reg=cfg.reg,
        training_curve=curve,
    )


def transform(model: DccaModel, X1, X2) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic forward passes of both towers."""
    O1, _ = forward(model.tower1, as_matrix(X1, "X1"))
    O2, _ = forward(model.tower2, as_matrix(X2, "X2"))
    return O1, O2


def fuse(O1, O2, alpha1: float) -> np.ndarray:
    """Weighted-sum fusion alpha1 * O1 + (1 - alpha1) * O2."""
    O1 = as_matrix(O1, "O1")
    O2 = as_matrix(O2, "O2")
    if O1.shape != O2.shape:
        raise DimensionError(f"O1 {O1.shape} and O2 {O2.shape} must match")
    if not 0.0 <= alpha1 <= 1.0:
        raise ParameterError(f"alpha1 must lie in [0, 1], got {alpha1}")
    return alpha1 * O1 + (1.0 - alpha1) * O2
