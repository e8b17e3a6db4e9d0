import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import ansatz_state
from znelab.ansatz import (
    ThetaGrid,
    build_ry_rz_circuit,
    make_theta_grid,
    prepare_state,
)
from znelab.errors import CapacityError, InvalidArgumentError

angles = st.floats(-10, 10, allow_nan=False)


def _shape(circuit):
    return [(op.kind, op.targets) for op in circuit]


def test_structure_two_qubits_zero_angles():
    c = build_ry_rz_circuit(2, (0, 0, 0, 0))
    assert _shape(c) == [("ry", (0,)), ("ry", (1,)), ("rz", (0,)), ("rz", (1,)), ("cnot", (0, 1))]
    assert [op.angle for op in c][:4] == [0.0] * 4


def test_structure_single_qubit_has_no_cnot():
    c = build_ry_rz_circuit(1, (0.3, -1.2))
    assert list(c) == [("ry", 0.3, (0,)), ("rz", -1.2, (0,))]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_structure_counts_and_order(n):
    theta = np.arange(2 * n) * 0.1
    c = build_ry_rz_circuit(n, theta)
    assert len(c) == 3 * n - 1
    assert [op.kind for op in c] == ["ry"] * n + ["rz"] * n + ["cnot"] * (n - 1)
    assert [op.angle for op in c.ops[:n]] == pytest.approx(theta[:n])
    assert [op.angle for op in c.ops[n : 2 * n]] == pytest.approx(theta[n:])
    assert [op.targets for op in c.ops[2 * n :]] == [(i, i + 1) for i in range(n - 1)]


@pytest.mark.parametrize("theta", [(0, 0, 0), (0, 0, 0, 0, 0), (0, math.nan, 0, 0)])
def test_bad_theta_rejected(theta):
    with pytest.raises(InvalidArgumentError):
        build_ry_rz_circuit(2, theta)


def test_prepare_state_examples():
    s2 = 1 / math.sqrt(2)
    cases = [
        ((0, 0, 0, 0), [1, 0, 0, 0]),
        ((0, math.pi, 0, 0), [0, 1, 0, 0]),
        ((math.pi / 2, 0, 0, 0), [s2, 0, 0, s2]),
    ]
    for theta, expected in cases:
        amps = prepare_state(build_ry_rz_circuit(2, theta)).amplitudes
        np.testing.assert_allclose(amps, expected, atol=1e-15)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(n=st.integers(1, 4), data=st.data())
def test_prepare_state_matches_dense_oracle(n, data, backend):
    theta = data.draw(st.lists(angles, min_size=2 * n, max_size=2 * n))
    got = prepare_state(build_ry_rz_circuit(n, theta)).amplitudes
    assert np.max(np.abs(got - ansatz_state(n, theta))) <= 1e-10


@settings(max_examples=60)
@given(a=angles, b1=angles, b2=angles)
def test_single_qubit_rz_leaves_probabilities(a, b1, b2):
    p1 = prepare_state(build_ry_rz_circuit(1, (a, b1))).probabilities()
    p2 = prepare_state(build_ry_rz_circuit(1, (a, b2))).probabilities()
    np.testing.assert_allclose(p1, p2, atol=1e-14)


def test_grid_examples():
    g = make_theta_grid(2, 8)
    assert len(g) == 4096
    np.testing.assert_allclose(g.axis_values, [k * math.pi / 4 for k in range(8)], atol=0)
    assert g.theta(g.index_of((0, math.pi, 0, 0))) == (0.0, math.pi, 0.0, 0.0)
    single = make_theta_grid(1, 1)
    assert len(single) == 1 and list(single) == [(0.0, 0.0)]


def test_grid_is_lexicographic_axis0_slowest():
    g = make_theta_grid(1, 3)
    pts = list(g)
    assert pts[0] == (0.0, 0.0)
    assert pts[1] == (0.0, g.axis_values[1])
    assert pts[3] == (g.axis_values[1], 0.0)
    assert [g.theta(i) for i in range(len(g))] == pts
    assert g.as_array().shape == (9, 2)


def test_grid_half_open_and_custom_range():
    g = make_theta_grid(1, 4, axis_range=(-1.0, 1.0))
    assert g.axis_values == (-1.0, -0.5, 0.0, 0.5)


@settings(max_examples=200)
@given(n=st.integers(1, 2), G=st.integers(1, 6), data=st.data())
def test_grid_round_trip(n, G, data):
    g = make_theta_grid(n, G)
    index = data.draw(st.integers(0, len(g) - 1))
    assert g.index_of(g.theta(index)) == index
    assert g.digits_to_index(g.index_to_digits(index)) == index


def test_grid_errors():
    with pytest.raises(CapacityError):
        make_theta_grid(3, 11)
    with pytest.raises(CapacityError):
        make_theta_grid(2, 8, max_points=4095)
    with pytest.raises(InvalidArgumentError):
        make_theta_grid(2, 0)
    with pytest.raises(InvalidArgumentError):
        make_theta_grid(2, 4, axis_range=(1.0, 1.0))
    g = make_theta_grid(1, 2)
    with pytest.raises(IndexError):
        g.theta(4)
    with pytest.raises(KeyError):
        g.index_of((0.1, 0.0))


def test_grid_is_hashable_value():
    assert make_theta_grid(2, 3) == make_theta_grid(2, 3)
    assert isinstance(make_theta_grid(2, 3), ThetaGrid)
