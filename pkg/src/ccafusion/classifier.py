"""Linear multiclass SVM (one-vs-rest, hinge loss, subgradient descent).

The final decision stage for every fusion strategy. Kept linear and
dependency-free: margins are calibrated to probabilities with a softmax,
which is enough for the MAX and Choquet decision-fusion orderings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError
from .numerics import RandomStream, as_matrix


@dataclass
class SvmModel:
    """Per-class weight rows (K x d), biases (K), and the training-loss curve."""

    weights: np.ndarray
    biases: np.ndarray
    C: float
    loss_curve: list[float]

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]


def _objective(W, b, X, Y, C):
    margins = np.maximum(0.0, 1.0 - Y * (X @ W.T + b))
    lam = 1.0 / (C * X.shape[0])
    return 0.5 * lam * float((W * W).sum()) + float(margins.mean(axis=0).sum())


def train_svm(
    X,
    y,
    C: float = 1.0,
    epochs: int = 200,
    stream: RandomStream = RandomStream(0),
    lr0: float = 0.5,
) -> SvmModel:
    """Train one-vs-rest hinge-loss linear classifiers by subgradient descent.

    Full-batch subgradient steps with a 1/sqrt(t) step-size schedule; weights
    are L2-regularized with strength 1/(C*N), biases are not. The per-epoch
    objective (summed over the K binary problems) is recorded.
    """
    X = as_matrix(X, "X")
    y = np.asarray(y, dtype=int)
    if y.shape != (X.shape[0],):
        raise DimensionError(f"labels shape {y.shape} != ({X.shape[0]},)")
    if C <= 0:
        raise ParameterError("C must be positive")
    classes = np.unique(y)
    K = int(classes.max()) + 1
    if classes.size < 2:
        raise ParameterError("training data holds a single class")
    if classes.min() < 0:
        raise ParameterError("labels must lie in 0..K-1")

    N, d = X.shape
    # full-batch subgradients are order-invariant; the permutation just keeps
    # the stream contract uniform with the other trainers
    perm = stream.generator().permutation(N)
    X, y = X[perm], y[perm]
    Y = np.where(y[:, None] == np.arange(K)[None, :], 1.0, -1.0)
    W = np.zeros((K, d))
    b = np.zeros(K)
    lam = 1.0 / (C * N)
    curve: list[float] = []
    for t in range(1, epochs + 1):
        scores = X @ W.T + b
        active = (1.0 - Y * scores) > 0.0
        coef = np.where(active, -Y, 0.0) / N
        lr = lr0 / np.sqrt(t)
        # proximal step for the L2 term: stable for any lam (tiny C), where a
        # plain subgradient step would overshoot and oscillate
        W = (W - lr * (coef.T @ X)) / (1.0 + lr * lam)
        b -= lr * coef.sum(axis=0)
        curve.append(_objective(W, b, X, Y, C))
    return SvmModel(weights=W, biases=b, C=float(C), loss_curve=curve)


def decision_scores(model: SvmModel, X) -> np.ndarray:
    X = as_matrix(X, "X")
    if X.shape[1] != model.weights.shape[1]:
        raise DimensionError(f"X has {X.shape[1]} cols, model expects {model.weights.shape[1]}")
    return X @ model.weights.T + model.biases


def predict(model: SvmModel, X) -> np.ndarray:
    """Argmax of per-class margins; ties go to the lowest class index."""
    return np.argmax(decision_scores(model, X), axis=1)


def predict_proba(model: SvmModel, X) -> np.ndarray:
    """Softmax over margins; rows sum to 1 and argmax agrees with predict."""
    scores = decision_scores(model, X)
    scores = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(scores)
    return e / e.sum(axis=1, keepdims=True)
