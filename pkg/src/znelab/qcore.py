"""Dense n-qubit states, gate matrices and unitary application.

Basis ordering: qubit 0 is the most significant bit of the basis index,
so the bitstring of index ``b`` reads qubit 0 .. n-1 from left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from . import _pykernels
from .errors import CapacityError, InvalidArgumentError

MAX_QUBITS = 12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

for _m in (I2, PAULI_X, PAULI_Y, PAULI_Z, HADAMARD, CNOT):
    _m.setflags(write=False)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_angle(theta) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"rotation angle must be finite, got {theta}")
    return theta


def gate_ry(theta: float) -> np.ndarray:
    theta = _check_angle(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return _frozen(np.array([[c, -s], [s, c]], dtype=complex))


def gate_rz(theta: float) -> np.ndarray:
    theta = _check_angle(theta)
    return _frozen(
        np.array(
            [[complex(math.cos(theta / 2), -math.sin(theta / 2)), 0],
             [0, complex(math.cos(theta / 2), math.sin(theta / 2))]]
        )
    )


def gate_rx(theta: float) -> np.ndarray:
    theta = _check_angle(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return _frozen(np.array([[c, -1j * s], [-1j * s, c]], dtype=complex))


def gate_cnot() -> np.ndarray:
    """CNOT with the control on the first (more significant) qubit of the pair."""
    return CNOT


def is_unitary(u: np.ndarray, atol: float = 1e-12) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def tensor(a: np.ndarray, b: np.ndarray, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Kronecker product ``a ⊗ b``; ``a`` occupies the more significant qubits."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dim = a.shape[0] * b.shape[0]
    if dim > 2**max_qubits:
        raise CapacityError(
            f"tensor product spans {int(math.log2(dim))} qubits, cap is {max_qubits}"
        )
    return _frozen(np.kron(a, b))


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be >= 1")
        if self.n_qubits > MAX_QUBITS:
            raise CapacityError(f"{self.n_qubits} qubits exceeds cap {MAX_QUBITS}")
        if amps.shape[0] != 2**self.n_qubits:
            raise InvalidArgumentError(
                f"expected {2**self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidArgumentError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state from a bitstring such as ``'01'``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        dim = 2**self.n_qubits
        rho = np.array(self.entries, dtype=complex)
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be >= 1")
        if self.n_qubits > MAX_QUBITS:
            raise CapacityError(f"{self.n_qubits} qubits exceeds cap {MAX_QUBITS}")
        if rho.shape != (dim, dim):
            raise InvalidArgumentError(f"expected shape {(dim, dim)}, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise InvalidArgumentError("density matrix entries must be finite")
        object.__setattr__(self, "entries", _frozen(rho))

    @classmethod
    def zero(cls, n_qubits: int) -> "DensityMatrix":
        rho = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
        rho[0, 0] = 1.0
        return cls(n_qubits, rho)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def probabilities(self) -> np.ndarray:
        return np.clip(self.entries.diagonal().real, 0.0, None)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


def _check_targets(n_qubits: int, targets: Sequence[int], gate_dim: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise InvalidArgumentError(f"duplicate target qubits {targets}")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise InvalidArgumentError(f"target qubit {t} out of range for {n_qubits} qubits")
    if gate_dim != 2 ** len(targets):
        raise InvalidArgumentError(
            f"gate of dimension {gate_dim} does not act on {len(targets)} qubit(s)"
        )
    return targets


def _apply_in_place(vec: np.ndarray, total: int, gate: np.ndarray, targets: list[int]):
    if len(targets) == 1:
        _kernels.apply_1q(vec, total, targets[0], gate)
    elif len(targets) == 2:
        _kernels.apply_2q(vec, total, targets[0], targets[1], gate)
    else:
        _pykernels._apply_local(vec, total, targets, gate)


def apply_unitary(state: StateVector, gate: np.ndarray, targets: Sequence[int]) -> StateVector:
    """Return ``state`` with ``gate`` applied to the ordered ``targets``.

    ``targets[0]`` maps to the most significant qubit of the gate's own
    basis, so ``apply_unitary(s, gate_cnot(), [c, t])`` controls on ``c``.
    """
    gate = np.ascontiguousarray(gate, dtype=complex)
    targets = _check_targets(state.n_qubits, targets, gate.shape[0])
    amps = state.amplitudes.copy()
    _apply_in_place(amps, state.n_qubits, gate, targets)
    return StateVector(state.n_qubits, amps)


def conjugate_density(rho: DensityMatrix, gate: np.ndarray, targets: Sequence[int]) -> DensityMatrix:
    """``U rho U^dagger`` with ``U`` embedded on ``targets``."""
    gate = np.ascontiguousarray(gate, dtype=complex)
    targets = _check_targets(rho.n_qubits, targets, gate.shape[0])
    n = rho.n_qubits
    flat = rho.entries.reshape(-1).copy()
    if len(targets) == 1:
        _kernels.conjugate_1q(flat, n, targets[0], gate)
    elif len(targets) == 2:
        _kernels.conjugate_2q(flat, n, targets[0], targets[1], gate)
    else:
        _pykernels._apply_local(flat, 2 * n, targets, gate)
        _pykernels._apply_local(flat, 2 * n, [n + t for t in targets], gate.conj())
    return DensityMatrix(n, flat.reshape(2**n, 2**n))


def to_density(state: StateVector) -> DensityMatrix:
    amps = state.amplitudes
    return DensityMatrix(state.n_qubits, np.outer(amps, amps.conj()))


def bitstring(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")
