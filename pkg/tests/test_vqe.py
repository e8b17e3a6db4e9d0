import math

import numpy as np
import pytest

from znelab.ansatz import make_theta_grid
from znelab.errors import InvalidArgumentError
from znelab.noise import NoiseModel
from znelab.observables import z_string
from znelab.vqe import (
    MODE_MIXED,
    MODE_PURE,
    MODE_SAMPLED,
    ScanResult,
    delta_e,
    min_energy,
    point_rng,
    scan_ideal,
    scan_noisy,
    scan_sampled,
)

LEVELS = [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]


@pytest.fixture(scope="module")
def grid():
    return make_theta_grid(2, 8)


@pytest.fixture(scope="module")
def ideal(grid):
    return scan_ideal(grid, 2, z_string(2))


@pytest.fixture(scope="module")
def small():
    return make_theta_grid(2, 4)


@pytest.fixture(scope="module")
def noisy_small(small):
    return {p: scan_noisy(small, 2, z_string(2), p) for p in LEVELS}


def test_ideal_examples(grid, ideal):
    assert ideal.mode == MODE_PURE and len(ideal) == 4096
    assert ideal.expectations[grid.index_of((0, 0, 0, 0))] == pytest.approx(1.0, abs=1e-15)
    assert ideal.expectations[grid.index_of((0, math.pi, 0, 0))] == pytest.approx(-1.0, abs=1e-15)
    gs = min_energy(ideal)
    assert gs.energy == pytest.approx(-1.0, abs=1e-12)
    assert ideal.expectations[gs.argmin_index] == gs.energy
    assert gs.argmin_theta == grid.theta(gs.argmin_index)
    assert np.all(ideal.expectations[: gs.argmin_index] > gs.energy)


def test_records_are_ordered(small, noisy_small):
    recs = noisy_small[0.03].records
    assert [r.grid_index for r in recs] == list(range(len(small)))
    assert recs[5].theta == small.theta(5)
    assert recs[5].noise_p == 0.03 and recs[5].mode == MODE_MIXED


def test_zero_noise_reduces_to_ideal(small, noisy_small):
    ideal = scan_ideal(small, 2, z_string(2))
    assert np.max(np.abs(noisy_small[0.0].expectations - ideal.expectations)) <= 1e-12


def test_extremes_damp_monotonically(noisy_small):
    mins = [min_energy(noisy_small[p]).energy for p in LEVELS]
    maxs = [float(noisy_small[p].expectations.max()) for p in LEVELS]
    assert all(a <= b for a, b in zip(mins, mins[1:]))
    assert all(a >= b for a, b in zip(maxs, maxs[1:]))
    assert -1 < mins[1] < mins[-1]


@pytest.mark.parametrize("p", [0.01, 0.05, 0.2])
def test_single_qubit_damping_law(p):
    g = make_theta_grid(1, 8)
    gs = min_energy(scan_noisy(g, 1, z_string(1), p))
    # RY and RZ each carry one channel; the minimizer is theta_0 = pi
    assert gs.energy == pytest.approx(-((1 - 4 * p / 3) ** 2), abs=1e-14)
    assert gs.argmin_theta[0] == pytest.approx(math.pi)


def test_all_modes_bounded(small, noisy_small):
    sampled = scan_sampled(small, 2, z_string(2), 0.05, None, 64, "paper00", 1)
    for scan in [*noisy_small.values(), sampled]:
        assert np.all(np.abs(scan.expectations) <= 1)


def test_sampled_converges_to_ideal_without_noise(small):
    shots = 10**5
    ideal = scan_ideal(small, 2, z_string(2)).expectations
    est = scan_sampled(small, 2, z_string(2), 0.0, None, shots, master_seed=7).expectations
    sigma = np.sqrt(np.clip(1 - ideal**2, 0, None) / shots)
    assert np.all(np.abs(est - ideal) <= 3 * sigma + 1e-12)


def test_sampled_determinism_and_workers(small):
    args = (small, 2, z_string(2), 0.03, NoiseModel(0.03), 256, "parity", 99)
    a = scan_sampled(*args)
    b = scan_sampled(*args)
    c = scan_sampled(*args, workers=2)
    np.testing.assert_array_equal(a.expectations, b.expectations)
    np.testing.assert_array_equal(a.expectations, c.expectations)
    d = scan_sampled(*args[:-1], 100)
    assert not np.array_equal(a.expectations, d.expectations)
    assert a.mode == MODE_SAMPLED and a.shots == 256 and a.estimator == "parity"


def test_exact_scan_independent_of_workers(small, noisy_small):
    par = scan_noisy(small, 2, z_string(2), 0.02, workers=3)
    np.testing.assert_array_equal(par.expectations, noisy_small[0.02].expectations)


def test_point_rng_substreams():
    assert point_rng(1, 5).integers(1 << 30) == point_rng(1, 5).integers(1 << 30)
    assert point_rng(1, 5).integers(1 << 30) != point_rng(1, 6).integers(1 << 30)


def test_min_energy_examples():
    g = make_theta_grid(1, 1)
    g3 = make_theta_grid(1, 3)
    scan = ScanResult(MODE_PURE, g3, [1.0, -1.0, 0.0, 0.5, 0.5, 0.5, 0.2, 0.2, 0.2])
    assert (min_energy(scan).energy, min_energy(scan).argmin_index) == (-1.0, 1)
    flat = ScanResult(MODE_PURE, g3, [0.3] * 9)
    assert min_energy(flat).argmin_index == 0
    assert min_energy(ScanResult(MODE_PURE, g, [0.25])).energy == 0.25


def test_delta_e(small, noisy_small, grid, ideal):
    assert all(d == 0 for _, d in delta_e(noisy_small[0.03], noisy_small[0.03]))
    noisy = scan_noisy(grid, 2, z_string(2), 0.05)
    diffs = dict(delta_e(noisy, ideal))
    assert diffs[min_energy(ideal).argmin_index] > 0
    assert all(abs(d) <= 2 for d in diffs.values())
    with pytest.raises(InvalidArgumentError):
        delta_e(noisy, noisy_small[0.05])


def test_scan_argument_errors(small):
    with pytest.raises(InvalidArgumentError):
        scan_ideal(small, 3, z_string(3))
    with pytest.raises(InvalidArgumentError):
        scan_ideal(small, 2, z_string(3))
    with pytest.raises(InvalidArgumentError):
        scan_noisy(small, 2, z_string(2), 0.01, NoiseModel(0.02))
    with pytest.raises(InvalidArgumentError):
        scan_sampled(small, 2, z_string(2), 0.01, None, 0)
    with pytest.raises(InvalidArgumentError):
        scan_sampled(small, 2, z_string(2), 0.01, None, 10, estimator="mean")
    with pytest.raises(InvalidArgumentError):
        ScanResult(MODE_PURE, small, [0.0])
