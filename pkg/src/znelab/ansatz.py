"""RY-RZ ansatz circuits and the angle grids scanned by the VQE driver."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import qcore
from .errors import CapacityError, InvalidArgumentError

MAX_SCAN_POINTS = 10**6


class Op(NamedTuple):
    kind: str  # "ry" | "rz" | "rx" | "cnot" | "x" | "y" | "z" | "h" | "i"
    angle: float | None
    targets: tuple[int, ...]


_FIXED = {
    "cnot": qcore.CNOT,
    "x": qcore.PAULI_X,
    "y": qcore.PAULI_Y,
    "z": qcore.PAULI_Z,
    "h": qcore.HADAMARD,
    "i": qcore.I2,
}
_ROTATIONS = {"ry": qcore.gate_ry, "rz": qcore.gate_rz, "rx": qcore.gate_rx}


def op_matrix(op: Op) -> np.ndarray:
    if op.kind in _ROTATIONS:
        return _ROTATIONS[op.kind](op.angle)
    try:
        return _FIXED[op.kind]
    except KeyError:
        raise InvalidArgumentError(f"unsupported gate kind {op.kind!r}") from None


@dataclass(frozen=True)
class CircuitDescriptor:
    n_qubits: int
    ops: tuple[Op, ...]

    def __iter__(self) -> Iterator[Op]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)


def build_ry_rz_circuit(n: int, theta: Sequence[float]) -> CircuitDescriptor:
    """RY(theta[i]) on every qubit, then RZ(theta[n + i]), then a CNOT(i, i+1) chain."""
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    theta = [float(t) for t in theta]
    if len(theta) != 2 * n:
        raise InvalidArgumentError(f"expected {2 * n} angles for {n} qubits, got {len(theta)}")
    if not all(math.isfinite(t) for t in theta):
        raise InvalidArgumentError("angles must be finite")
    ops = [Op("ry", theta[i], (i,)) for i in range(n)]
    ops += [Op("rz", theta[n + i], (i,)) for i in range(n)]
    ops += [Op("cnot", None, (i, i + 1)) for i in range(n - 1)]
    return CircuitDescriptor(n, tuple(ops))


def prepare_state(circuit: CircuitDescriptor) -> qcore.StateVector:
    state = qcore.StateVector.zero(circuit.n_qubits)
    for op in circuit:
        state = qcore.apply_unitary(state, op_matrix(op), op.targets)
    return state


@dataclass(frozen=True)
class ThetaGrid:
    """Lexicographic product grid over 2n angle axes, axis 0 slowest."""

    n: int
    points_per_axis: int
    axis_values: tuple[float, ...]
    axis_range: tuple[float, float] = (0.0, 2 * math.pi)

    @property
    def dimension(self) -> int:
        return 2 * self.n

    def __len__(self) -> int:
        return self.points_per_axis**self.dimension

    def index_to_digits(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < len(self):
            raise IndexError(f"grid index {index} out of range [0, {len(self)})")
        digits = []
        for _ in range(self.dimension):
            index, d = divmod(index, self.points_per_axis)
            digits.append(d)
        return tuple(reversed(digits))

    def digits_to_index(self, digits: Sequence[int]) -> int:
        index = 0
        for d in digits:
            index = index * self.points_per_axis + int(d)
        return index

    def theta(self, index: int) -> tuple[float, ...]:
        return tuple(self.axis_values[d] for d in self.index_to_digits(index))

    def index_of(self, theta: Sequence[float], atol: float = 1e-12) -> int:
        """Grid index of an on-grid angle vector."""
        values = np.asarray(self.axis_values)
        digits = []
        for t in theta:
            hits = np.flatnonzero(np.abs(values - t) <= atol)
            if hits.size == 0:
                raise KeyError(f"angle {t} is not on the grid axis")
            digits.append(int(hits[0]))
        return self.digits_to_index(digits)

    def __iter__(self) -> Iterator[tuple[float, ...]]:
        return itertools.product(self.axis_values, repeat=self.dimension)

    def as_array(self) -> np.ndarray:
        """All grid points, shape ``(len(grid), 2n)``, in index order."""
        return np.array(list(self), dtype=float).reshape(len(self), self.dimension)


def make_theta_grid(
    n: int,
    points_per_axis: int,
    axis_range: tuple[float, float] = (0.0, 2 * math.pi),
    max_points: int = MAX_SCAN_POINTS,
) -> ThetaGrid:
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    if points_per_axis < 1:
        raise InvalidArgumentError("points_per_axis must be >= 1")
    lo, hi = float(axis_range[0]), float(axis_range[1])
    if not lo < hi:
        raise InvalidArgumentError(f"axis range must satisfy lo < hi, got ({lo}, {hi})")
    total = points_per_axis ** (2 * n)
    if total > max_points:
        raise CapacityError(f"grid has {total} points, scan cap is {max_points}")
    values = tuple(lo + k * (hi - lo) / points_per_axis for k in range(points_per_axis))
    return ThetaGrid(n, points_per_axis, values, (lo, hi))
