import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import X, Z, embed_any, random_state
from znelab import qcore
from znelab.errors import CapacityError, InvalidArgumentError
from znelab.qcore import StateVector, apply_unitary, gate_cnot, gate_ry, gate_rz, tensor, to_density

angles = st.floats(-50, 50, allow_nan=False)
s2 = 1 / math.sqrt(2)


def test_ry_values():
    np.testing.assert_array_equal(gate_ry(0), np.eye(2))
    np.testing.assert_allclose(gate_ry(math.pi), [[0, -1], [1, 0]], atol=1e-16)
    np.testing.assert_allclose(gate_ry(math.pi / 2), s2 * np.array([[1, -1], [1, 1]]), atol=1e-16)


def test_rz_values():
    np.testing.assert_array_equal(gate_rz(0), np.eye(2))
    np.testing.assert_allclose(gate_rz(math.pi), np.diag([-1j, 1j]), atol=1e-16)
    np.testing.assert_allclose(gate_rz(2 * math.pi), -np.eye(2), atol=1e-15)


@pytest.mark.parametrize("gate", [gate_ry, gate_rz, qcore.gate_rx])
@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_rotations_reject_non_finite(gate, bad):
    with pytest.raises(InvalidArgumentError):
        gate(bad)


@settings(max_examples=200)
@given(angles)
def test_rotations_unitary(theta):
    for u in (gate_ry(theta), gate_rz(theta), qcore.gate_rx(theta)):
        assert qcore.is_unitary(u, 1e-12)


def test_cnot_basis_action():
    np.testing.assert_array_equal(
        apply_unitary(StateVector.basis("10"), gate_cnot(), [0, 1]).amplitudes,
        StateVector.basis("11").amplitudes,
    )
    np.testing.assert_array_equal(
        apply_unitary(StateVector.basis("00"), gate_cnot(), [0, 1]).amplitudes,
        StateVector.basis("00").amplitudes,
    )
    np.testing.assert_array_equal(gate_cnot() @ gate_cnot(), np.eye(4))


def test_tensor_examples():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(tensor(Z, Z), np.diag([1, -1, -1, 1]))
    out = tensor(X, np.eye(2)) @ StateVector.basis("00").amplitudes
    np.testing.assert_array_equal(out, StateVector.basis("10").amplitudes)


def test_tensor_capacity():
    big = np.eye(2**7)
    with pytest.raises(CapacityError):
        tensor(big, big)
    assert tensor(np.eye(2**6), np.eye(2**6)).shape == (4096, 4096)


def test_tensor_capacity_configurable():
    with pytest.raises(CapacityError):
        tensor(np.eye(4), np.eye(4), max_qubits=3)


@settings(max_examples=50)
@given(st.lists(angles, min_size=3, max_size=3))
def test_tensor_associative(ts):
    a, b, c = gate_ry(ts[0]), gate_rz(ts[1]), qcore.gate_rx(ts[2])
    left, right = tensor(tensor(a, b), c), tensor(a, tensor(b, c))
    assert np.max(np.abs(left - right)) <= 1e-14
    assert qcore.is_unitary(left, 1e-12)


def test_apply_unitary_examples(backend):
    out = apply_unitary(StateVector.zero(2), gate_ry(math.pi), [0])
    np.testing.assert_allclose(out.amplitudes, StateVector.basis("10").amplitudes, atol=1e-16)
    psi = StateVector(3, random_state(np.random.default_rng(1), 3))
    np.testing.assert_array_equal(apply_unitary(psi, np.eye(2), [1]).amplitudes, psi.amplitudes)
    out = apply_unitary(StateVector.basis("10"), gate_cnot(), [0, 1])
    np.testing.assert_array_equal(out.amplitudes, StateVector.basis("11").amplitudes)


@pytest.mark.parametrize(
    "targets,gate",
    [([2], np.eye(2)), ([0, 0], np.eye(4)), ([0], np.eye(4)), ([-1], np.eye(2))],
)
def test_apply_unitary_errors(targets, gate):
    with pytest.raises(InvalidArgumentError):
        apply_unitary(StateVector.zero(2), gate, targets)


def test_apply_unitary_three_qubit_gate_matches_dense(rng):
    u = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))[0]
    psi = StateVector(4, random_state(rng, 4))
    got = apply_unitary(psi, u, [3, 0, 2]).amplitudes
    np.testing.assert_allclose(got, embed_any(u, [3, 0, 2], 4) @ psi.amplitudes, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), theta=angles)
def test_apply_preserves_norm(seed, n, theta):
    rng = np.random.default_rng(seed)
    psi = StateVector(n, random_state(rng, n))
    q = int(rng.integers(n))
    out = apply_unitary(psi, gate_ry(theta) @ gate_rz(theta / 3), [q])
    assert abs(out.norm() - 1) <= 1e-12
    if n >= 2:
        a, b = (int(x) for x in rng.choice(n, 2, replace=False))
        assert abs(apply_unitary(out, gate_cnot(), [a, b]).norm() - 1) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_x_flips_exactly_one_bit(n):
    for k in range(n):
        for index in range(2**n):
            amps = np.zeros(2**n)
            amps[index] = 1
            out = apply_unitary(StateVector(n, amps), X, [k]).amplitudes
            assert np.flatnonzero(out).tolist() == [index ^ (1 << (n - 1 - k))]


def test_to_density_examples():
    np.testing.assert_array_equal(to_density(StateVector.basis("0")).entries, np.diag([1, 0]))
    plus = StateVector(1, [s2, s2])
    np.testing.assert_allclose(to_density(plus).entries, np.full((2, 2), 0.5), atol=1e-16)


@settings(max_examples=50)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_to_density_pure_properties(seed, n):
    rho = to_density(StateVector(n, random_state(np.random.default_rng(seed), n)))
    m = rho.entries
    assert abs(rho.trace() - 1) <= 1e-12
    assert np.max(np.abs(m - m.conj().T)) <= 1e-12
    assert np.max(np.abs(m @ m - m)) <= 1e-10
    assert abs(rho.purity() - 1) <= 1e-10
    assert np.linalg.eigvalsh(m).min() >= -1e-10


def test_state_validation():
    with pytest.raises(InvalidArgumentError):
        StateVector(2, [1, 0, 0])
    with pytest.raises(InvalidArgumentError):
        StateVector(1, [math.nan, 0])
    with pytest.raises(CapacityError):
        StateVector.zero(qcore.MAX_QUBITS + 1)


def test_values_are_immutable():
    psi = StateVector.zero(1)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0
    with pytest.raises(ValueError):
        gate_ry(0.3)[0, 0] = 2
