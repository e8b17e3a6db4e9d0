"""Z-string Hamiltonian, exact expectations, shot sampling and counts estimators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError
from .qcore import DensityMatrix, StateVector, bitstring


@lru_cache(maxsize=None)
def _parity_signs(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits)
    weight = np.zeros_like(idx)
    for q in range(n_qubits):
        weight += (idx >> q) & 1
    signs = np.where(weight % 2 == 0, 1.0, -1.0)
    signs.setflags(write=False)
    return signs


@dataclass(frozen=True)
class PauliZString:
    """Z ⊗ Z ⊗ ... ⊗ Z on all ``n_qubits``; diagonal with entries ±1 by parity."""

    n_qubits: int

    def eigenvalue(self, basis: int | str) -> int:
        if isinstance(basis, str):
            basis = int(basis, 2)
        return int(_parity_signs(self.n_qubits)[basis])

    def diagonal(self) -> np.ndarray:
        return _parity_signs(self.n_qubits)

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal()).astype(complex)


def z_string(n: int) -> PauliZString:
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    return PauliZString(n)


def _check_dims(n_state: int, obs: PauliZString):
    if n_state != obs.n_qubits:
        raise InvalidArgumentError(
            f"observable acts on {obs.n_qubits} qubits, state has {n_state}"
        )


def _clamp(x: float) -> float:
    # rounding can push a ±1 eigenvalue a few ulps past the spectrum
    return min(1.0, max(-1.0, x))


def expectation_state(state: StateVector, obs: PauliZString) -> float:
    _check_dims(state.n_qubits, obs)
    return _clamp(float(np.dot(obs.diagonal(), state.probabilities())))


def expectation_density(rho: DensityMatrix, obs: PauliZString) -> float:
    _check_dims(rho.n_qubits, obs)
    value = np.dot(obs.diagonal(), rho.entries.diagonal())
    if abs(value.imag) > 1e-10:
        raise InvalidArgumentError(f"non-Hermitian input: imaginary residue {value.imag:.3g}")
    return _clamp(float(value.real))


@dataclass(frozen=True)
class ShotCounts:
    n_qubits: int
    counts: Mapping[str, int]

    def __post_init__(self):
        counts = {k: int(v) for k, v in sorted(self.counts.items()) if int(v) != 0}
        for key, value in self.counts.items():
            if len(key) != self.n_qubits or set(key) - {"0", "1"}:
                raise InvalidArgumentError(f"bad bitstring {key!r} for {self.n_qubits} qubits")
            if int(value) < 0:
                raise InvalidArgumentError(f"negative count for {key!r}")
        if not counts:
            raise InvalidArgumentError("counts are empty")
        object.__setattr__(self, "counts", counts)

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    def get(self, key: str) -> int:
        return self.counts.get(key, 0)


def sample_counts(probabilities, shots: int, rng: np.random.Generator) -> ShotCounts:
    """Multinomial draw of ``shots`` computational-basis outcomes.

    ``probabilities`` may be a 1-D array, a :class:`StateVector` or a
    :class:`DensityMatrix` (its diagonal is used).
    """
    if isinstance(probabilities, (StateVector, DensityMatrix)):
        probs = probabilities.probabilities()
    else:
        probs = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    shots = int(shots)
    if shots < 1:
        raise InvalidArgumentError("shots must be >= 1")
    n = int(np.log2(probs.shape[0]))
    if 2**n != probs.shape[0]:
        raise InvalidArgumentError("probability vector length must be a power of two")
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise InvalidArgumentError(f"probabilities sum to {total}, not 1")
    draws = rng.multinomial(shots, probs / total)
    return ShotCounts(n, {bitstring(i, n): int(c) for i, c in enumerate(draws) if c})


def estimate_parity(counts: ShotCounts) -> float:
    """Unbiased estimator of <Z...Z>: parity-signed outcome frequencies."""
    signs = _parity_signs(counts.n_qubits)
    total = sum(signs[int(k, 2)] * v for k, v in counts.counts.items())
    return float(total / counts.shots)


def estimate_paper00(counts: ShotCounts) -> float:
    """``1 - 2 * P(all zeros)``; note this maps |0..0> to -1, unlike the parity estimator."""
    zeros = "0" * counts.n_qubits
    return 1.0 - 2.0 * counts.get(zeros) / counts.shots


ESTIMATORS = {"parity": estimate_parity, "paper00": estimate_paper00}
