"""Depolarizing Kraus channels and noisy density-matrix evolution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels, qcore
from .ansatz import CircuitDescriptor, op_matrix
from .errors import InvalidArgumentError

MAX_NOISE_P = 0.75
ONE_QUBIT_KINDS = frozenset({"ry", "rz", "rx", "x", "y", "z", "h", "i"})
TWO_QUBIT_KINDS = frozenset({"cnot"})
DEFAULT_GATE_FILTER = ONE_QUBIT_KINDS | TWO_QUBIT_KINDS


def _check_p(p) -> float:
    p = float(p)
    if not (0.0 <= p <= MAX_NOISE_P):
        raise InvalidArgumentError(f"noise level p must lie in [0, {MAX_NOISE_P}], got {p}")
    return p


@dataclass(frozen=True)
class KrausChannel:
    arity: int
    operators: np.ndarray  # shape (m, 2**arity, 2**arity)

    def __post_init__(self):
        ops = np.ascontiguousarray(self.operators, dtype=complex)
        if self.arity not in (1, 2):
            raise InvalidArgumentError(f"channel arity must be 1 or 2, got {self.arity}")
        d = 2**self.arity
        if ops.ndim != 3 or ops.shape[1:] != (d, d):
            raise InvalidArgumentError(f"operators must have shape (m, {d}, {d})")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    def completeness(self) -> np.ndarray:
        """Sum of K^dagger K; the identity for a trace-preserving channel."""
        return np.einsum("kji,kjl->il", self.operators.conj(), self.operators)

    def __len__(self) -> int:
        return self.operators.shape[0]


def depolarizing_1q(p: float) -> KrausChannel:
    p = _check_p(p)
    a, b = math.sqrt(1.0 - p), math.sqrt(p / 3.0)
    return KrausChannel(1, np.stack([a * qcore.I2, b * qcore.PAULI_X, b * qcore.PAULI_Y, b * qcore.PAULI_Z]))


def depolarizing_2q(p: float) -> KrausChannel:
    """Independent depolarizing on both qubits: the 16 products K_i ⊗ K_j."""
    single = depolarizing_1q(p).operators
    return KrausChannel(2, np.stack([np.kron(ki, kj) for ki in single for kj in single]))


def mixed_form_lambda(p: float) -> float:
    """Weight of the maximally mixed component, ``rho -> (1-lam) rho + lam I/2``."""
    return 4.0 * _check_p(p) / 3.0


def depolarize_mixed_form(rho: qcore.DensityMatrix, p: float, target: int) -> qcore.DensityMatrix:
    """Single-qubit depolarizing written as a mix with the reduced state ⊗ I/2.

    Equivalent to applying ``depolarizing_1q(p)`` on ``target``; computed via
    partial trace rather than Kraus operators.
    """
    lam = mixed_form_lambda(p)
    n = rho.n_qubits
    t = rho.entries.reshape([2] * (2 * n))
    # trace out the target, then reinsert it as I/2
    reduced = np.trace(t, axis1=target, axis2=n + target)
    mixed = np.multiply.outer(reduced, np.eye(2) / 2)
    order = list(range(2 * n - 2))
    # source axes: kept rows, kept cols, target row, target col
    rows = order[: n - 1]
    cols = order[n - 1 :]
    rows.insert(target, 2 * n - 2)
    cols.insert(target, 2 * n - 1)
    mixed = np.transpose(mixed, rows + cols).reshape(2**n, 2**n)
    return qcore.DensityMatrix(n, (1 - lam) * rho.entries + lam * mixed)


def apply_channel(rho: qcore.DensityMatrix, ch: KrausChannel, targets: Sequence[int]) -> qcore.DensityMatrix:
    targets = [int(t) for t in targets]
    if len(targets) != ch.arity:
        raise InvalidArgumentError(f"channel of arity {ch.arity} given {len(targets)} target(s)")
    qcore._check_targets(rho.n_qubits, targets, 2**ch.arity)
    flat = np.ascontiguousarray(rho.entries.reshape(-1))
    out = _apply_channel_flat(flat, rho.n_qubits, ch, targets)
    dim = 2**rho.n_qubits
    return qcore.DensityMatrix(rho.n_qubits, out.reshape(dim, dim))


def _apply_channel_flat(flat, n, ch, targets):
    if ch.arity == 1:
        return _kernels.channel_1q(flat, n, targets[0], ch.operators)
    return _kernels.channel_2q(flat, n, targets[0], targets[1], ch.operators)


@dataclass(frozen=True)
class NoiseModel:
    p: float
    gate_filter: frozenset[str] = DEFAULT_GATE_FILTER
    channel_1q: KrausChannel = field(init=False)
    channel_2q: KrausChannel = field(init=False)

    def __post_init__(self):
        p = _check_p(self.p)
        gate_filter = frozenset(self.gate_filter)
        if p > 0 and not gate_filter:
            raise InvalidArgumentError("gate_filter must be non-empty when p > 0")
        unknown = gate_filter - DEFAULT_GATE_FILTER
        if unknown:
            raise InvalidArgumentError(f"unknown gate kinds in filter: {sorted(unknown)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "gate_filter", gate_filter)
        object.__setattr__(self, "channel_1q", depolarizing_1q(p))
        object.__setattr__(self, "channel_2q", depolarizing_2q(p))

    def channel_for(self, kind: str, arity: int) -> KrausChannel | None:
        if self.p == 0.0 or kind not in self.gate_filter:
            return None
        return self.channel_1q if arity == 1 else self.channel_2q


def _evolve_flat(circuit: CircuitDescriptor, model: NoiseModel) -> np.ndarray:
    n = circuit.n_qubits
    flat = np.zeros(4**n, dtype=complex)
    flat[0] = 1.0
    for op in circuit:
        u = op_matrix(op)
        if len(op.targets) == 1:
            _kernels.conjugate_1q(flat, n, op.targets[0], u)
        else:
            _kernels.conjugate_2q(flat, n, op.targets[0], op.targets[1], u)
        ch = model.channel_for(op.kind, len(op.targets))
        if ch is not None:
            flat = _apply_channel_flat(flat, n, ch, op.targets)
    return flat


def evolve_noisy(circuit: CircuitDescriptor, model: NoiseModel) -> qcore.DensityMatrix:
    """Evolve |0..0><0..0| through ``circuit``, depolarizing after each filtered gate."""
    for op in circuit:
        qcore._check_targets(circuit.n_qubits, op.targets, 2 ** len(op.targets))
        if len(op.targets) > 2:
            raise InvalidArgumentError("noisy evolution supports 1- and 2-qubit gates only")
    dim = 2**circuit.n_qubits
    return qcore.DensityMatrix(circuit.n_qubits, _evolve_flat(circuit, model).reshape(dim, dim))
