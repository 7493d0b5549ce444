"""Feedforward network with one sigmoid output, trained by backpropagation.

Plain mini-batch gradient descent on binary cross-entropy. Weight init and
batch shuffling both draw from one SplitMix64 stream seeded by the config,
so training is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import BadDimensions, DimensionMismatch, EmptyData
from .rng import SplitMix64

LOSS_CLAMP = 1e-12
# forward() output is kept strictly inside (0, 1)
_P_MIN = 5e-324
_P_MAX = 1.0 - 2.0**-53


class Activation(str, Enum):
    SIGMOID = "sigmoid"
    RELU = "relu"


@dataclass(frozen=True)
class MLPConfig:
    input_dim: int
    hidden_dims: tuple = (64,)
    hidden_activation: Activation = Activation.SIGMOID
    learning_rate: float = 0.05
    epochs: int = 30
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(h) for h in self.hidden_dims))
        object.__setattr__(self, "hidden_activation", Activation(self.hidden_activation))
        if self.input_dim < 1 or any(h < 1 for h in self.hidden_dims):
            raise BadDimensions(f"all layer sizes must be >= 1: {self.input_dim}, {self.hidden_dims}")
        if not self.learning_rate > 0:
            raise BadDimensions("learning_rate must be > 0")
        if self.epochs < 0 or self.batch_size < 1:
            raise BadDimensions("epochs must be >= 0 and batch_size >= 1")

    @property
    def layer_sizes(self) -> tuple:
        return (self.input_dim, *self.hidden_dims, 1)


@dataclass(eq=False)
class MLPModel:
    weights: list   # per layer, (fan_out, fan_in)
    biases: list    # per layer, (fan_out,)
    config: MLPConfig

    def parameters(self) -> list:
        """Weights and biases interleaved: W0, b0, W1, b1, ..."""
        out = []
        for W, b in zip(self.weights, self.biases):
            out += [W, b]
        return out

    def copy(self) -> "MLPModel":
        return MLPModel([W.copy() for W in self.weights], [b.copy() for b in self.biases], self.config)


@dataclass
class TrainReport:
    epoch_losses: list = field(default_factory=list)
    epochs: int = 0


def init(config: MLPConfig, rng: SplitMix64 | None = None) -> MLPModel:
    """Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)), zero biases.

    Draws are consumed layer by layer in row-major order.
    """
    rng = SplitMix64(config.seed) if rng is None else rng
    sizes = config.layer_sizes
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        s = float(np.sqrt(6.0 / (fan_in + fan_out)))
        u = rng.random_array(fan_in * fan_out)
        weights.append((-s + (2.0 * s) * u).reshape(fan_out, fan_in))
        biases.append(np.zeros(fan_out))
    return MLPModel(weights, biases, config)


def sigmoid(z):
    z = np.clip(z, -709.0, 709.0)
    return 1.0 / (1.0 + np.exp(-z))


def _activate(z, kind):
    if kind is Activation.RELU:
        return np.maximum(z, 0.0)
    return sigmoid(z)


def _activation_grad(z, a, kind):
    if kind is Activation.RELU:
        return (z > 0).astype(z.dtype)  # subgradient 0 at 0
    return a * (1.0 - a)


def _check_input(model: MLPModel, X: np.ndarray):
    if X.shape[-1] != model.config.input_dim:
        raise DimensionMismatch(f"input has {X.shape[-1]} features, model expects {model.config.input_dim}")


def _forward_batch(model: MLPModel, X: np.ndarray):
    """Rows of X -> (pre-activations, activations) per layer; last is the output."""
    kind = model.config.hidden_activation
    zs, acts = [], [X]
    a = X
    last = len(model.weights) - 1
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ W.T + b
        a = sigmoid(z) if i == last else _activate(z, kind)
        zs.append(z)
        acts.append(a)
    return zs, acts


def forward(model: MLPModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("forward takes a single 1-D input vector")
    _check_input(model, x)
    _, acts = _forward_batch(model, x[None, :])
    return float(np.clip(acts[-1][0, 0], _P_MIN, _P_MAX))


def forward_batch(model: MLPModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    _check_input(model, X)
    _, acts = _forward_batch(model, X)
    return np.clip(acts[-1][:, 0], _P_MIN, _P_MAX)


def loss(p, y) -> float:
    """Binary cross-entropy with p clamped to [1e-12, 1 - 1e-12]."""
    p = float(np.clip(p, LOSS_CLAMP, 1.0 - LOSS_CLAMP))
    return float(-(y * np.log(p) + (1 - y) * np.log(1.0 - p)))


def _backward_batch(model: MLPModel, X: np.ndarray, y: np.ndarray):
    """Mean gradients over the rows of X, same layout as ``parameters()``."""
    kind = model.config.hidden_activation
    zs, acts = _forward_batch(model, X)
    m = X.shape[0]
    delta = (acts[-1] - y[:, None]) / m  # dL/dz at the sigmoid output
    grads_W = [None] * len(model.weights)
    grads_b = [None] * len(model.weights)
    for i in range(len(model.weights) - 1, -1, -1):
        grads_W[i] = delta.T @ acts[i]
        grads_b[i] = delta.sum(axis=0)
        if i:
            delta = (delta @ model.weights[i]) * _activation_grad(zs[i - 1], acts[i], kind)
    out = []
    for gW, gb in zip(grads_W, grads_b):
        out += [gW, gb]
    return out


def backward(model: MLPModel, x, y) -> list:
    """Exact gradient of loss(forward(x), y) for every weight and bias."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("backward takes a single 1-D input vector")
    _check_input(model, x)
    return _backward_batch(model, x[None, :], np.array([float(y)]))


def _mean_loss(model, X, y):
    p = np.clip(forward_batch(model, X), LOSS_CLAMP, 1.0 - LOSS_CLAMP)
    return float(np.mean(-(y * np.log(p) + (1 - y) * np.log(1.0 - p))))


def train(X, y, config: MLPConfig) -> tuple[MLPModel, TrainReport]:
    """Mini-batch gradient descent.

    Each epoch shuffles the example order with the generator that built
    the initial weights, walks it in ``batch_size`` chunks (the last may be
    short) and takes one step of size ``learning_rate`` per chunk. The
    report holds each epoch's mean per-batch loss measured before the step.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyData("no training examples")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"{X.shape[0]} inputs but {y.shape} targets")
    rng = SplitMix64(config.seed)
    model = init(config, rng)
    _check_input(model, X)
    report = TrainReport()
    order = list(range(X.shape[0]))
    lr = config.learning_rate
    for _ in range(config.epochs):
        rng.shuffle(order)
        total, n_seen = 0.0, 0
        for start in range(0, len(order), config.batch_size):
            idx = order[start:start + config.batch_size]
            Xb, yb = X[idx], y[idx]
            total += _mean_loss(model, Xb, yb) * len(idx)
            n_seen += len(idx)
            grads = _backward_batch(model, Xb, yb)
            for param, g in zip(model.parameters(), grads):
                param -= lr * g
        report.epoch_losses.append(total / n_seen)
        report.epochs += 1
    return model, report


def predict(model: MLPModel, x):
    """1 (spam) when the output is >= 0.5, else 0."""
    return 1 if forward(model, x) >= 0.5 else 0


def predict_batch(model: MLPModel, X) -> np.ndarray:
    return (forward_batch(model, X) >= 0.5).astype(int)


def numeric_gradient(f, theta: np.ndarray, eps: float) -> np.ndarray:
    """Central differences of scalar ``f()`` w.r.t. ``theta``, perturbed in place."""
    grad = np.zeros_like(theta)
    flat = theta.reshape(-1)
    g = grad.reshape(-1)
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + eps
        up = f()
        flat[k] = orig - eps
        down = f()
        flat[k] = orig
        g[k] = (up - down) / (2 * eps)
    return grad


def relative_error(analytic, numeric) -> float:
    a = np.ravel(analytic)
    n = np.ravel(numeric)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - n) / np.maximum(np.maximum(np.abs(a), np.abs(n)), 1e-8)))


def gradient_check(model: MLPModel, x, y, eps: float = 1e-5) -> float:
    """Largest relative error between ``backward`` and central differences."""
    if not eps > 0:
        raise ValueError("eps must be > 0")
    x = np.asarray(x, dtype=np.float64)
    analytic = backward(model, x, y)
    probe = model.copy()
    worst = 0.0

    def f():
        # unclamped loss: its gradient is what backward computes
        _, acts = _forward_batch(probe, x[None, :])
        p = acts[-1][0, 0]
        return -(y * np.log(p) + (1 - y) * np.log1p(-p))

    for param, g in zip(probe.parameters(), analytic):
        worst = max(worst, relative_error(g, numeric_gradient(f, param, eps)))
    return worst
