"""Synthetic two-modality, multi-class dataset generator.

Both views observe the same latent Gaussian factors (centered at per-class
means), so the class signal is shared across modalities while the view noise
is independent. View 2 can be passed through a saturating tanh mixing to make
the cross-modal map nonlinear; the mixing-matrix scale controls severity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .numerics import RandomStream


@dataclass
class GenConfig:
    classes: int = 3
    latent_dim: int = 4
    d1: int = 8
    d2: int = 6
    samples_per_class: int = 100
    noise_std1: float = 0.5
    noise_std2: float = 0.5
    nonlinear: bool = False
    mixing_scale: float = 1.5
    separation: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.classes < 2:
            raise ParameterError("need at least 2 classes")
        if self.latent_dim < 1:
            raise ParameterError("latent_dim must be >= 1")
        if min(self.noise_std1, self.noise_std2) < 0:
            raise ParameterError("noise-std must be nonnegative")
        if self.samples_per_class < 1:
            raise ParameterError("samples_per_class must be >= 1")


def _class_means(rng: np.random.Generator, K: int, L: int, separation: float) -> np.ndarray:
    """Class means with pairwise distance `separation` (exact when K <= L)."""
    if K <= L:
        Q = np.linalg.qr(rng.standard_normal((L, L)))[0]
        dirs = Q[:, :K].T
    else:
        dirs = rng.standard_normal((K, L))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return (separation / np.sqrt(2.0)) * dirs


def generate(cfg: GenConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Generate (X1, X2, labels); bit-identical for identical configs."""
    stream = RandomStream(cfg.seed)
    rng = stream.generator()
    K, L = cfg.classes, cfg.latent_dim
    n = cfg.samples_per_class
    N = K * n

    means = _class_means(rng, K, L, cfg.separation)
    A1 = rng.standard_normal((L, cfg.d1)) / np.sqrt(L)
    A2 = rng.standard_normal((L, cfg.d2)) / np.sqrt(L)

    labels = np.repeat(np.arange(K), n)
    z = means[labels] + rng.standard_normal((N, L))
    X1 = z @ A1 + cfg.noise_std1 * rng.standard_normal((N, cfg.d1))
    clean2 = np.tanh(cfg.mixing_scale * (z @ A2)) if cfg.nonlinear else z @ A2
    X2 = clean2 + cfg.noise_std2 * rng.standard_normal((N, cfg.d2))
    return X1, X2, labels


@dataclass
class DatasetBundle:
    """A generated dataset plus the group structure its split scheme expects."""

    X1: np.ndarray
    X2: np.ndarray
    labels: np.ndarray
    groups: np.ndarray
    config: GenConfig


def seed_v_like(seed: int = 0, samples_per_class: int = 90) -> DatasetBundle:
    """Five-class bimodal task with SEED-V-shaped dimensions (310 and 33).

    Noise is calibrated so a linear SVM on either single modality lands near
    80% accuracy, leaving headroom for fusion gains. Samples carry group ids
    0..2 per class, giving the three-fold leave-one-group-out structure.
    """
    cfg = GenConfig(
        classes=5,
        latent_dim=8,
        d1=310,
        d2=33,
        samples_per_class=samples_per_class,
        noise_std1=6.0,
        noise_std2=2.0,
        nonlinear=True,
        mixing_scale=1.5,
        separation=4.0,
        seed=seed,
    )
    X1, X2, labels = generate(cfg)
    groups = np.concatenate([np.arange(samples_per_class) % 3 for _ in range(cfg.classes)])
    return DatasetBundle(X1=X1, X2=X2, labels=labels, groups=groups, config=cfg)
