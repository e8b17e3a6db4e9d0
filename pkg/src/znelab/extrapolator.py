"""Zero-noise extrapolation from (noise level, energy) pairs.

A small ReLU network trained with Adam on mean squared error, plus the
classical baselines: linear least squares, polynomial least squares and
Richardson (Lagrange) extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError, NumericError, TrainingError

DEFAULT_LAYER_SIZES = (1, 512, 1024, 1)


@dataclass(frozen=True)
class TrainingDataset:
    noise_p: tuple[float, ...]
    energies: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.noise_p)
        r = tuple(float(x) for x in self.energies)
        if not p or len(p) != len(r):
            raise InvalidArgumentError("dataset needs equal, non-zero numbers of p and r values")
        if len(set(p)) != len(p):
            raise InvalidArgumentError(f"duplicate noise levels in {p}")
        if not all(math.isfinite(x) for x in p + r):
            raise InvalidArgumentError("dataset values must be finite")
        if any(abs(x) > 1.0 for x in r):
            raise InvalidArgumentError("Z-string energies must lie in [-1, 1]")
        object.__setattr__(self, "noise_p", p)
        object.__setattr__(self, "energies", r)

    @classmethod
    def from_pairs(cls, pairs) -> "TrainingDataset":
        pairs = list(pairs)
        return cls(tuple(p for p, _ in pairs), tuple(r for _, r in pairs))

    def __len__(self) -> int:
        return len(self.noise_p)

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.noise_p, self.energies))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.noise_p), np.array(self.energies)


@dataclass
class MlpParameters:
    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]  # weights[k] has shape (layer_sizes[k+1], layer_sizes[k])
    biases: list[np.ndarray]

    def arrays(self) -> list[np.ndarray]:
        """Flat view in a fixed order: W1, b1, W2, b2, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    @classmethod
    def from_arrays(cls, layer_sizes, arrays: Sequence[np.ndarray]) -> "MlpParameters":
        return cls(tuple(layer_sizes), list(arrays[0::2]), list(arrays[1::2]))

    def copy(self) -> "MlpParameters":
        return MlpParameters.from_arrays(self.layer_sizes, [a.copy() for a in self.arrays()])


def init_mlp(layer_sizes: Sequence[int] = DEFAULT_LAYER_SIZES, seed: int = 0) -> MlpParameters:
    """Glorot-uniform weights, zero biases."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise InvalidArgumentError(f"invalid layer sizes {list(layer_sizes)}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpParameters(sizes, weights, biases)


def _forward_batch(params: MlpParameters, x: np.ndarray):
    """Return the output column and the per-layer activations for backprop."""
    acts = [x.reshape(-1, 1).astype(float)]
    pre = []
    last = len(params.weights) - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = acts[-1] @ w.T + b
        pre.append(z)
        acts.append(z if k == last else np.maximum(z, 0.0))
    return acts[-1], acts, pre


def forward(params: MlpParameters, x) -> float | np.ndarray:
    """Network output for a scalar input (returns float) or a 1-D batch."""
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise NumericError("network input must be finite")
    y, _, _ = _forward_batch(params, xs)
    if not np.all(np.isfinite(y)):
        raise NumericError("non-finite network output")
    return float(y[0, 0]) if scalar else y[:, 0]


def mse(predicted, actual) -> float:
    predicted = np.asarray(predicted, dtype=float).reshape(-1)
    actual = np.asarray(actual, dtype=float).reshape(-1)
    if predicted.shape != actual.shape:
        raise InvalidArgumentError(f"length mismatch: {predicted.size} vs {actual.size}")
    if predicted.size == 0:
        raise InvalidArgumentError("mse of empty sequences")
    return float(np.mean((actual - predicted) ** 2))


def backward(params: MlpParameters, x, y) -> tuple[float, list[np.ndarray]]:
    """Loss and exact MSE gradients, ordered like ``params.arrays()``.

    The ReLU derivative at exactly zero is taken as 0.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1, 1)
    if x.size == 0:
        raise InvalidArgumentError("empty batch")
    out, acts, pre = _forward_batch(params, x)
    n = x.size
    loss = float(np.mean((out - y) ** 2))
    delta = 2.0 * (out - y) / n
    grads_w, grads_b = [], []
    for k in range(len(params.weights) - 1, -1, -1):
        grads_w.append(delta.T @ acts[k])
        grads_b.append(delta.sum(axis=0))
        if k:
            delta = (delta @ params.weights[k]) * (pre[k - 1] > 0)
    grads = []
    for gw, gb in zip(reversed(grads_w), reversed(grads_b)):
        grads += [gw, gb]
    return loss, grads


@dataclass(frozen=True)
class AdamConfig:
    alpha: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    bias_correction: bool = False

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidArgumentError("alpha must be > 0")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise InvalidArgumentError("beta1 and beta2 must lie in [0, 1)")
        if not self.epsilon > 0:
            raise InvalidArgumentError("epsilon must be > 0")


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0

    @classmethod
    def zeros_like(cls, params: MlpParameters) -> "AdamState":
        arrays = params.arrays()
        return cls([np.zeros_like(a) for a in arrays], [np.zeros_like(a) for a in arrays])


def _adam_update_(arrays, grads, m, v, t, config: AdamConfig) -> None:
    """In-place Adam arithmetic shared by ``adam_step`` and ``train``."""
    c1, c2 = 1 - config.beta1**t, 1 - config.beta2**t
    for a, g, mk, vk in zip(arrays, grads, m, v):
        _kernels.adam_update(
            a.reshape(-1), np.ascontiguousarray(g, dtype=float).reshape(-1),
            mk.reshape(-1), vk.reshape(-1),
            config.alpha, config.beta1, config.beta2, config.epsilon,
            config.bias_correction, c1, c2,
        )


def adam_step(
    params: MlpParameters, grads: Sequence[np.ndarray], state: AdamState, config: AdamConfig
) -> tuple[MlpParameters, AdamState]:
    """One Adam update.

    Default: ``theta -= alpha * m / sqrt(v + eps)`` with raw moments.  With
    ``bias_correction`` the moments are rescaled by ``1 - beta**t`` first.
    """
    arrays = [a.copy() for a in params.arrays()]
    if len(grads) != len(arrays) or any(np.shape(g) != a.shape for g, a in zip(grads, arrays)):
        raise InvalidArgumentError("gradient shapes do not match parameters")
    m = [x.copy() for x in state.m]
    v = [x.copy() for x in state.v]
    t = state.t + 1
    _adam_update_(arrays, grads, m, v, t, config)
    return MlpParameters.from_arrays(params.layer_sizes, arrays), AdamState(m, v, t)


@dataclass
class TrainingMetrics:
    losses: list[float] = field(default_factory=list)

    @property
    def epochs(self) -> int:
        return len(self.losses)

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


def train(
    dataset: TrainingDataset,
    params: MlpParameters,
    config: AdamConfig = AdamConfig(),
    epochs: int = 500,
) -> tuple[MlpParameters, TrainingMetrics]:
    """Full-batch Adam training; ``losses[k]`` is the MSE before update ``k``."""
    if len(dataset) == 0:
        raise InvalidArgumentError("empty dataset")
    x, y = dataset.arrays()
    params = params.copy()
    arrays = params.arrays()
    state = AdamState.zeros_like(params)
    metrics = TrainingMetrics()
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(int(epochs)):
            loss, grads = backward(params, x, y)
            if not math.isfinite(loss):
                raise TrainingError(f"loss diverged at epoch {epoch}", epoch=epoch)
            metrics.losses.append(loss)
            state.t += 1
            _adam_update_(arrays, grads, state.m, state.v, state.t, config)
    return params, metrics


def predict_zero_noise(params: MlpParameters) -> float:
    return forward(params, 0.0)


# -- classical baselines ----------------------------------------------------


def _distinct_p(dataset, needed: int):
    # baselines also take raw (p, r) pairs, which skip the energy bound
    if isinstance(dataset, TrainingDataset):
        x, y = dataset.arrays()
    else:
        pts = np.asarray(list(dataset), dtype=float).reshape(-1, 2)
        x, y = pts[:, 0], pts[:, 1]
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("points must be finite")
        if np.unique(x).size != x.size:
            raise InvalidArgumentError(f"duplicate noise levels in {x.tolist()}")
    if np.unique(x).size < needed:
        raise InvalidArgumentError(f"need at least {needed} distinct noise levels, got {np.unique(x).size}")
    return x, y


def fit_polynomial(dataset, degree: int) -> np.ndarray:
    """Least-squares coefficients, lowest order first; ``coeffs[0]`` is the p=0 value.

    Solves the normal equations of the column-scaled Vandermonde matrix.
    """
    degree = int(degree)
    if degree < 0:
        raise InvalidArgumentError("degree must be >= 0")
    x, y = _distinct_p(dataset, degree + 1)
    scale = float(np.max(np.abs(x))) or 1.0
    vander = np.vander(x / scale, degree + 1, increasing=True)
    gram = vander.T @ vander
    try:
        coeffs = np.linalg.solve(gram, vander.T @ y)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentError(f"singular least-squares system: {exc}") from None
    return coeffs / scale ** np.arange(degree + 1)


def eval_polynomial(coeffs, p) -> float | np.ndarray:
    return np.polynomial.polynomial.polyval(p, coeffs)


def fit_linear(dataset) -> tuple[float, float]:
    """Ordinary least squares; returns ``(intercept, slope)``."""
    x, y = _distinct_p(dataset, 2)
    xm, ym = x.mean(), y.mean()
    slope = float(np.sum((x - xm) * (y - ym)) / np.sum((x - xm) ** 2))
    return float(ym - slope * xm), slope


def lagrange_eval(dataset, p) -> float | np.ndarray:
    """Interpolating polynomial through every dataset point, evaluated at ``p``."""
    x, y = _distinct_p(dataset, 2)
    p = np.asarray(p, dtype=float)
    total = np.zeros_like(p)
    for j in range(x.size):
        others = np.delete(x, j)
        basis = np.ones_like(p)
        for xm in others:
            basis = basis * (p - xm) / (x[j] - xm)
        total = total + y[j] * basis
    return float(total) if total.ndim == 0 else total


def richardson_extrapolate(dataset) -> float:
    """Value at p=0 of the Lagrange polynomial through every point."""
    return lagrange_eval(dataset, 0.0)


__all__ = [
    "AdamConfig",
    "AdamState",
    "MlpParameters",
    "TrainingDataset",
    "TrainingMetrics",
    "adam_step",
    "backward",
    "eval_polynomial",
    "fit_linear",
    "fit_polynomial",
    "forward",
    "init_mlp",
    "lagrange_eval",
    "mse",
    "predict_zero_noise",
    "richardson_extrapolate",
    "train",
]
