"""Experiment configuration: a flat TOML document with fail-fast validation.

Every key is optional.  Example::

    n_qubits = 2
    points_per_axis = 8
    noise_levels = [0.01, 0.02, 0.03, 0.04, 0.05]
    device_noise_p = 0.03
    shots = 1024
    estimator = "parity"          # or "paper00"
    layer_sizes = [1, 512, 1024, 1]
    epochs = 500
    master_seed = 42
    gate_filter = ["ry", "rz", "cnot"]
"""

from __future__ import annotations

import dataclasses
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ansatz import MAX_SCAN_POINTS
from .errors import ConfigError
from .extrapolator import AdamConfig
from .noise import DEFAULT_GATE_FILTER, MAX_NOISE_P
from .observables import ESTIMATORS
from .qcore import MAX_QUBITS

PAPER_NOISE_LEVELS = (0.01, 0.02, 0.03, 0.04, 0.05)


@dataclass(frozen=True)
class ExperimentConfig:
    n_qubits: int = 2
    points_per_axis: int = 8
    noise_levels: tuple[float, ...] = PAPER_NOISE_LEVELS
    device_noise_p: float | None = None  # None: middle of noise_levels
    shots: int = 1024
    estimator: str = "parity"
    layer_sizes: tuple[int, ...] = (1, 512, 1024, 1)
    adam_alpha: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    adam_bias_correction: bool = False
    epochs: int = 500
    dense_levels: int = 0  # >0: train on this many evenly spaced p levels instead
    master_seed: int = 42
    output_dir: str = "out"
    gate_filter: tuple[str, ...] | None = None

    def __post_init__(self):
        validate(self)

    @property
    def adam(self) -> AdamConfig:
        return AdamConfig(
            self.adam_alpha, self.adam_beta1, self.adam_beta2, self.adam_epsilon,
            self.adam_bias_correction,
        )

    @property
    def device_p(self) -> float:
        if self.device_noise_p is not None:
            return self.device_noise_p
        levels = sorted(self.noise_levels)
        return levels[len(levels) // 2]

    @property
    def training_levels(self) -> tuple[float, ...]:
        if self.dense_levels <= 0:
            return tuple(self.noise_levels)
        lo, hi = min(self.noise_levels), max(self.noise_levels)
        if self.dense_levels == 1:
            return (lo,)
        step = (hi - lo) / (self.dense_levels - 1)
        return tuple(lo + k * step for k in range(self.dense_levels))

    @property
    def filter_set(self) -> frozenset[str]:
        return DEFAULT_GATE_FILTER if self.gate_filter is None else frozenset(self.gate_filter)

    @property
    def scan_points(self) -> int:
        return self.points_per_axis ** (2 * self.n_qubits)

    def echo(self) -> dict:
        """Config as recorded in reports; the output location is left out."""
        out = dataclasses.asdict(self)
        out.pop("output_dir")
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _fail(key, message):
    raise ConfigError(f"{key}: {message}", key=key)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v):
    return (isinstance(v, (int, float)) and not isinstance(v, bool)) and math.isfinite(v)


def validate(cfg: ExperimentConfig) -> None:
    if not _is_int(cfg.n_qubits) or not 1 <= cfg.n_qubits <= MAX_QUBITS:
        _fail("n_qubits", f"must be an integer in [1, {MAX_QUBITS}]")
    if not _is_int(cfg.points_per_axis) or cfg.points_per_axis < 1:
        _fail("points_per_axis", "must be a positive integer")
    if cfg.points_per_axis ** (2 * cfg.n_qubits) > MAX_SCAN_POINTS:
        _fail("points_per_axis", f"grid exceeds the {MAX_SCAN_POINTS}-point scan cap")
    levels = cfg.noise_levels
    if not levels or not all(_is_real(p) for p in levels):
        _fail("noise_levels", "must be a non-empty list of numbers")
    if len(set(levels)) != len(levels):
        _fail("noise_levels", f"duplicate values in {list(levels)}")
    if any(not 0 < p <= MAX_NOISE_P for p in levels):
        _fail("noise_levels", f"values must lie in (0, {MAX_NOISE_P}]")
    if cfg.device_noise_p is not None and (
        not _is_real(cfg.device_noise_p) or not 0 <= cfg.device_noise_p <= MAX_NOISE_P
    ):
        _fail("device_noise_p", f"must lie in [0, {MAX_NOISE_P}]")
    if not _is_int(cfg.shots) or cfg.shots < 1:
        _fail("shots", "must be a positive integer")
    if cfg.estimator not in ESTIMATORS:
        _fail("estimator", f"must be one of {sorted(ESTIMATORS)}")
    sizes = cfg.layer_sizes
    if len(sizes) < 2 or not all(_is_int(s) and s >= 1 for s in sizes):
        _fail("layer_sizes", "needs >= 2 positive integers")
    if sizes[0] != 1 or sizes[-1] != 1:
        _fail("layer_sizes", "input and output widths must be 1")
    for key in ("adam_alpha", "adam_beta1", "adam_beta2", "adam_epsilon"):
        if not _is_real(getattr(cfg, key)):
            _fail(key, "must be a finite number")
    if not cfg.adam_alpha > 0:
        _fail("adam_alpha", "must be > 0")
    if not 0 <= cfg.adam_beta1 < 1:
        _fail("adam_beta1", "must lie in [0, 1)")
    if not 0 <= cfg.adam_beta2 < 1:
        _fail("adam_beta2", "must lie in [0, 1)")
    if not cfg.adam_epsilon > 0:
        _fail("adam_epsilon", "must be > 0")
    if not isinstance(cfg.adam_bias_correction, bool):
        _fail("adam_bias_correction", "must be true or false")
    if not _is_int(cfg.epochs) or cfg.epochs < 1:
        _fail("epochs", "must be a positive integer")
    if not _is_int(cfg.dense_levels) or cfg.dense_levels < 0 or cfg.dense_levels == 1:
        _fail("dense_levels", "must be 0 (off) or an integer >= 2")
    if not _is_int(cfg.master_seed) or cfg.master_seed < 0:
        _fail("master_seed", "must be a non-negative integer")
    if not isinstance(cfg.output_dir, str) or not cfg.output_dir:
        _fail("output_dir", "must be a non-empty string")
    if cfg.gate_filter is not None:
        unknown = set(cfg.gate_filter) - DEFAULT_GATE_FILTER
        if unknown:
            _fail("gate_filter", f"unknown gate kinds {sorted(unknown)}")
        if not cfg.gate_filter:
            _fail("gate_filter", "must name at least one gate kind")


_TUPLE_KEYS = {"noise_levels", "layer_sizes", "gate_filter"}


def config_from_mapping(data: dict) -> ExperimentConfig:
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        _fail(unknown[0], "unknown configuration key")
    values = {}
    for key, value in data.items():
        if key in _TUPLE_KEYS and value is not None:
            if not isinstance(value, list):
                _fail(key, "must be an array")
            value = tuple(value)
        values[key] = value
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:  # comparisons on wrongly typed values
        raise ConfigError(str(exc)) from None


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r"line (\d+)", str(exc))
        line = int(match.group(1)) if match else None
        raise ConfigError(f"config parse error: {exc}", line=line) from None
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        _fail(nested[0], "tables are not allowed; the config is a flat key-value document")
    return config_from_mapping(data)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return parse_config(text)
