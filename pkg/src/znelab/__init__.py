"""Density-matrix VQE scans under depolarizing noise, with neural-network
and polynomial zero-noise extrapolation."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402
from .ansatz import build_ry_rz_circuit, make_theta_grid, prepare_state  # noqa: E402
from .noise import NoiseModel, depolarizing_1q, depolarizing_2q, evolve_noisy  # noqa: E402
from .observables import z_string  # noqa: E402
from .vqe import min_energy, scan_ideal, scan_noisy, scan_sampled  # noqa: E402

__all__ = [
    "BACKEND",
    "NoiseModel",
    "build_ry_rz_circuit",
    "depolarizing_1q",
    "depolarizing_2q",
    "evolve_noisy",
    "make_theta_grid",
    "min_energy",
    "prepare_state",
    "scan_ideal",
    "scan_noisy",
    "scan_sampled",
    "z_string",
]
