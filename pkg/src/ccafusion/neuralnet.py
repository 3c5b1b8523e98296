"""Minimal dense feedforward engine: forward, exact backprop, sgd/rmsprop,
and a finite-difference gradient checker.

Shared by the DCCA towers, the MINE statistic network, and BDAE fine-tuning.
Everything is plain numpy and fully deterministic given a RandomStream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError, ParameterError, TrainingError
from .numerics import RandomStream, as_matrix

ACTIVATIONS = ("identity", "sigmoid", "tanh", "relu")


@dataclass(frozen=True)
class LayerSpec:
    input_dim: int
    output_dim: int
    activation: str = "sigmoid"

    def __post_init__(self):
        if self.input_dim < 1 or self.output_dim < 1:
            raise ParameterError(f"layer dims must be >= 1, got {self.input_dim}x{self.output_dim}")
        if self.activation not in ACTIVATIONS:
            raise ParameterError(f"unknown activation {self.activation!r}, expected one of {ACTIVATIONS}")


def _act(name: str, z: np.ndarray) -> np.ndarray:
    if name == "identity":
        return z
    if name == "sigmoid":
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    if name == "tanh":
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _act_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Derivative of the activation at pre-activation z with cached output a."""
    if name == "identity":
        return np.ones_like(z)
    if name == "sigmoid":
        return a * (1.0 - a)
    if name == "tanh":
        return 1.0 - a * a
    return (z > 0).astype(z.dtype)


class Network:
    """Ordered dense layers with weights W (in x out) and biases b (out)."""

    def __init__(self, specs: list[LayerSpec], stream: RandomStream):
        if not specs:
            raise ParameterError("a network needs at least one layer")
        for prev, nxt in zip(specs, specs[1:]):
            if prev.output_dim != nxt.input_dim:
                raise DimensionError(
                    f"layer dims do not chain: {prev.output_dim} -> {nxt.input_dim}"
                )
        self.specs = list(specs)
        rng = stream.generator()
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for spec in specs:
            bound = np.sqrt(6.0 / (spec.input_dim + spec.output_dim))
            self.weights.append(rng.uniform(-bound, bound, size=(spec.input_dim, spec.output_dim)))
            self.biases.append(np.zeros(spec.output_dim))

    @property
    def input_dim(self) -> int:
        return self.specs[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.specs[-1].output_dim

    @property
    def parameter_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def parameters(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self) -> "Network":
        dup = object.__new__(Network)
        dup.specs = list(self.specs)
        dup.weights = [w.copy() for w in self.weights]
        dup.biases = [b.copy() for b in self.biases]
        return dup


@dataclass
class Tape:
    """Per-layer forward cache: inputs, pre-activations, activations."""

    inputs: list[np.ndarray]
    pre: list[np.ndarray]
    post: list[np.ndarray]
    net_id: int


def forward(net: Network, X) -> tuple[np.ndarray, Tape]:
    """Run X through the network, caching enough for exact backprop."""
    X = as_matrix(X, "X")
    if X.shape[1] != net.input_dim:
        raise DimensionError(f"X has {X.shape[1]} cols, network expects {net.input_dim}")
    inputs, pres, posts = [], [], []
    a = X
    for spec, W, b in zip(net.specs, net.weights, net.biases):
        inputs.append(a)
        z = a @ W + b
        a = _act(spec.activation, z)
        pres.append(z)
        posts.append(a)
    return a, Tape(inputs, pres, posts, id(net))


def backward(net: Network, tape: Tape, dLoss_dOutput) -> list[tuple[np.ndarray, np.ndarray]]:
    """Backpropagate an upstream gradient; returns per-layer (dW, db)."""
    if tape.net_id != id(net) or len(tape.inputs) != len(net.specs):
        raise ContractError("tape does not belong to this network (stale tape)")
    dA = np.asarray(dLoss_dOutput, dtype=float)
    if dA.shape != tape.post[-1].shape:
        raise DimensionError(
            f"upstream gradient shape {dA.shape} != output shape {tape.post[-1].shape}"
        )
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(net.specs)
    for i in reversed(range(len(net.specs))):
        spec = net.specs[i]
        dZ = dA * _act_grad(spec.activation, tape.pre[i], tape.post[i])
        grads[i] = (tape.inputs[i].T @ dZ, dZ.sum(axis=0))
        if i > 0:
            dA = dZ @ net.weights[i].T
    return grads


@dataclass
class OptimizerConfig:
    method: str = "rmsprop"
    learning_rate: float = 0.001
    batch_size: int = 100
    momentum: float = 0.0
    decay: float = 0.9
    eps: float = 1e-8

    def __post_init__(self):
        if self.method not in ("sgd", "rmsprop"):
            raise ParameterError(f"unknown optimizer {self.method!r}")
        if self.learning_rate <= 0:
            raise ParameterError("learning rate must be positive")
        if self.batch_size < 2:
            raise ParameterError("batch size must be >= 2 (batch covariance needs it)")


class OptimizerState:
    """Per-parameter accumulators (rmsprop mean-square, sgd momentum)."""

    def __init__(self, net: Network):
        self.acc = [np.zeros_like(p) for p in net.parameters()]


def step(net: Network, grads, cfg: OptimizerConfig, state: OptimizerState | None = None) -> OptimizerState:
    """Update network parameters in place from per-layer (dW, db) gradients.

    sgd: p <- p - lr * g (plus classical momentum when configured).
    rmsprop: p <- p - lr * g / sqrt(acc + eps) with decayed mean-square acc.
    Returns the optimizer state so callers can thread it through steps.
    """
    flat: list[np.ndarray] = []
    for dW, db in grads:
        flat.extend((np.asarray(dW, dtype=float), np.asarray(db, dtype=float)))
    params = net.parameters()
    if len(flat) != len(params):
        raise DimensionError(f"expected {len(params)} gradient arrays, got {len(flat)}")
    for g, p in zip(flat, params):
        if g.shape != p.shape:
            raise DimensionError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        if not np.all(np.isfinite(g)):
            finite = g[np.isfinite(g)]
            peak = float(np.abs(finite).max()) if finite.size else float("nan")
            raise TrainingError(
                f"non-finite gradient (finite max abs {peak}, nan={bool(np.isnan(g).any())})"
            )
    if state is None:
        state = OptimizerState(net)
    if cfg.method == "sgd":
        for p, g, m in zip(params, flat, state.acc):
            if cfg.momentum:
                m *= cfg.momentum
                m += g
                g = m
            p -= cfg.learning_rate * g
    else:
        for p, g, m in zip(params, flat, state.acc):
            m *= cfg.decay
            m += (1.0 - cfg.decay) * g * g
            p -= cfg.learning_rate * g / np.sqrt(m + cfg.eps)
    return state


@dataclass
class GradCheckReport:
    max_rel_error: float
    checked: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tol


def grad_check(
    net: Network,
    loss_fn,
    X,
    tol: float = 1e-4,
    stream: RandomStream = RandomStream(0),
    samples: int = 60,
    step_size: float = 1e-5,
) -> GradCheckReport:
    """Compare backprop gradients against central finite differences.

    `loss_fn(output) -> (loss, dLoss_dOutput)` must be deterministic. A seeded
    random sample of parameters is perturbed; relative error uses the larger of
    the two magnitudes with an absolute guard for near-zero pairs.
    """
    X = as_matrix(X, "X")
    out, tape = forward(net, X)
    _, dOut = loss_fn(out)
    analytic = backward(net, tape, dOut)
    flat_grads = []
    for dW, db in analytic:
        flat_grads.extend((dW, db))
    params = net.parameters()

    coords = [(i,) + idx for i, p in enumerate(params) for idx in np.ndindex(p.shape)]
    rng = stream.generator()
    if len(coords) > samples:
        pick = rng.choice(len(coords), size=samples, replace=False)
        coords = [coords[i] for i in sorted(pick)]

    max_rel = 0.0
    for coord in coords:
        i, idx = coord[0], coord[1:]
        orig = params[i][idx]
        params[i][idx] = orig + step_size
        lp, _ = loss_fn(forward(net, X)[0])
        params[i][idx] = orig - step_size
        lm, _ = loss_fn(forward(net, X)[0])
        params[i][idx] = orig
        numeric = (lp - lm) / (2.0 * step_size)
        a = flat_grads[i][idx]
        denom = max(abs(a), abs(numeric), 1e-8)
        max_rel = max(max_rel, abs(a - numeric) / denom)
    return GradCheckReport(max_rel_error=float(max_rel), checked=len(coords), tol=tol)
