"""Grid-scan VQE: ideal, exact-noisy and shot-sampled expectation scans."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .ansatz import ThetaGrid, build_ry_rz_circuit, op_matrix
from .errors import InvalidArgumentError
from .noise import NoiseModel, _evolve_flat
from .observables import ESTIMATORS, PauliZString, ShotCounts, _clamp, _parity_signs
from .qcore import bitstring

MODE_PURE = "exact-pure"
MODE_MIXED = "exact-mixed"
MODE_SAMPLED = "sampled"


class ExpectationRecord(NamedTuple):
    grid_index: int
    theta: tuple[float, ...]
    noise_p: float | None
    expectation: float
    mode: str


@dataclass(frozen=True)
class ScanResult:
    mode: str
    grid: ThetaGrid
    expectations: np.ndarray  # indexed by grid_index
    noise_p: float | None = None
    shots: int | None = None
    estimator: str | None = None

    def __post_init__(self):
        values = np.array(self.expectations, dtype=float)
        if values.shape != (len(self.grid),):
            raise InvalidArgumentError(
                f"scan holds {values.shape} values for a grid of {len(self.grid)} points"
            )
        values.setflags(write=False)
        object.__setattr__(self, "expectations", values)

    def __len__(self) -> int:
        return len(self.grid)

    @property
    def records(self) -> list[ExpectationRecord]:
        return [
            ExpectationRecord(i, theta, self.noise_p, float(e), self.mode)
            for i, (theta, e) in enumerate(zip(self.grid, self.expectations))
        ]


@dataclass(frozen=True)
class GroundStateEstimate:
    energy: float
    argmin_theta: tuple[float, ...]
    argmin_index: int


def _check_obs(grid: ThetaGrid, n: int, obs: PauliZString):
    if grid.n != n:
        raise InvalidArgumentError(f"grid built for {grid.n} qubits, scan requested for {n}")
    if obs.n_qubits != n:
        raise InvalidArgumentError(f"observable acts on {obs.n_qubits} qubits, expected {n}")


def _pure_probabilities(n: int, theta) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    for op in build_ry_rz_circuit(n, theta):
        u = op_matrix(op)
        if len(op.targets) == 1:
            _kernels.apply_1q(psi, n, op.targets[0], u)
        else:
            _kernels.apply_2q(psi, n, op.targets[0], op.targets[1], u)
    return np.abs(psi) ** 2


def _mixed_probabilities(n: int, theta, model: NoiseModel) -> np.ndarray:
    flat = _evolve_flat(build_ry_rz_circuit(n, theta), model)
    return np.clip(flat[:: 2**n + 1].real, 0.0, None)


def point_rng(master_seed: int, grid_index: int) -> np.random.Generator:
    """Independent substream for one grid point; stable under any scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(grid_index)]))


def _eval_chunk(task) -> np.ndarray:
    mode, grid, n, model, shots, estimator, seed, start, stop = task
    signs = _parity_signs(n)
    out = np.empty(stop - start)
    for k, index in enumerate(range(start, stop)):
        theta = grid.theta(index)
        if model is None or model.p == 0.0:
            probs = _pure_probabilities(n, theta)
        else:
            probs = _mixed_probabilities(n, theta, model)
        if mode == MODE_SAMPLED:
            draws = point_rng(seed, index).multinomial(shots, probs / probs.sum())
            counts = ShotCounts(n, {bitstring(i, n): int(c) for i, c in enumerate(draws) if c})
            out[k] = ESTIMATORS[estimator](counts)
        else:
            out[k] = _clamp(float(np.dot(signs, probs)))
    return out


def _run(mode, grid, n, model, shots=None, estimator=None, seed=None, workers=1) -> np.ndarray:
    total = len(grid)
    workers = max(1, int(workers))
    if workers == 1:
        return _eval_chunk((mode, grid, n, model, shots, estimator, seed, 0, total))
    bounds = np.linspace(0, total, workers * 4 + 1).astype(int)
    tasks = [
        (mode, grid, n, model, shots, estimator, seed, int(a), int(b))
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_eval_chunk, tasks))
    return np.concatenate(parts)


def scan_ideal(grid: ThetaGrid, n: int, obs: PauliZString, workers: int = 1) -> ScanResult:
    _check_obs(grid, n, obs)
    return ScanResult(MODE_PURE, grid, _run(MODE_PURE, grid, n, None, workers=workers))


def scan_noisy(
    grid: ThetaGrid, n: int, obs: PauliZString, p: float, model: NoiseModel | None = None,
    workers: int = 1,
) -> ScanResult:
    """Exact density-matrix scan; ``model`` defaults to depolarizing on every gate."""
    _check_obs(grid, n, obs)
    if model is None:
        model = NoiseModel(p)
    elif model.p != float(p):
        raise InvalidArgumentError(f"noise model built for p={model.p}, scan requested p={p}")
    values = _run(MODE_MIXED, grid, n, model, workers=workers)
    return ScanResult(MODE_MIXED, grid, values, noise_p=model.p)


def scan_sampled(
    grid: ThetaGrid,
    n: int,
    obs: PauliZString,
    p: float,
    model: NoiseModel | None,
    shots: int,
    estimator: str = "parity",
    master_seed: int = 0,
    workers: int = 1,
) -> ScanResult:
    """Simulated device: noisy evolution, multinomial shots, counts estimator."""
    _check_obs(grid, n, obs)
    if int(shots) < 1:
        raise InvalidArgumentError("shots must be >= 1")
    if estimator not in ESTIMATORS:
        raise InvalidArgumentError(f"unknown estimator {estimator!r}; choose from {sorted(ESTIMATORS)}")
    if model is None:
        model = NoiseModel(p)
    elif model.p != float(p):
        raise InvalidArgumentError(f"noise model built for p={model.p}, scan requested p={p}")
    values = _run(MODE_SAMPLED, grid, n, model, int(shots), estimator, int(master_seed), workers)
    return ScanResult(MODE_SAMPLED, grid, values, noise_p=model.p, shots=int(shots), estimator=estimator)


def min_energy(scan: ScanResult) -> GroundStateEstimate:
    """Minimum expectation; ties resolve to the lowest grid index."""
    if len(scan) == 0:
        raise InvalidArgumentError("empty scan")
    index = int(np.argmin(scan.expectations))
    return GroundStateEstimate(float(scan.expectations[index]), scan.grid.theta(index), index)


def delta_e(a: ScanResult, b: ScanResult) -> list[tuple[int, float]]:
    """Per-point differences ``a - b`` over a shared grid."""
    if a.grid != b.grid:
        raise InvalidArgumentError("scans were taken on different grids")
    diff = a.expectations - b.expectations
    return [(i, float(d)) for i, d in enumerate(diff)]
