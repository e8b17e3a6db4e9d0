"""End-to-end experiment: scans, dataset, training, baselines, report, plot data."""

from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, artifacts
from .ansatz import ThetaGrid, make_theta_grid
from .config import ExperimentConfig
from .errors import PipelineError
from .extrapolator import (
    MlpParameters,
    TrainingDataset,
    TrainingMetrics,
    eval_polynomial,
    fit_linear,
    fit_polynomial,
    forward,
    init_mlp,
    lagrange_eval,
    predict_zero_noise,
    richardson_extrapolate,
    train,
)
from .noise import NoiseModel
from .observables import z_string
from .vqe import ScanResult, delta_e, min_energy, scan_ideal, scan_noisy, scan_sampled

log = logging.getLogger(__name__)

DEVICE_LABEL = "simulated_device"
CURVE_POINTS = 100

REPORT_KEYS = (
    "ideal_energy",
    "noisy_energies",
    "device_energy",
    "nn_prediction",
    "baseline_linear",
    "baseline_richardson",
    "baseline_poly2",
    "abs_err_nn",
    "abs_err_device",
    "inequality_holds",
    "seed",
    "config",
    "tool_version",
)


@dataclass(frozen=True)
class Report:
    ideal_energy: float
    noisy_energies: dict[float, float]
    device_energy: float
    nn_prediction: float
    baseline_linear: float
    baseline_richardson: float
    baseline_poly2: float | None
    seed: int
    config: dict
    tool_version: str = __version__

    @property
    def abs_err_nn(self) -> float:
        return abs(self.ideal_energy - self.nn_prediction)

    @property
    def abs_err_device(self) -> float:
        return abs(self.ideal_energy - self.device_energy)

    @property
    def inequality_holds(self) -> bool:
        return self.abs_err_nn < self.abs_err_device

    def to_dict(self) -> dict:
        out = {key: getattr(self, key) for key in REPORT_KEYS}
        out["noisy_energies"] = {repr(float(p)): e for p, e in self.noisy_energies.items()}
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        return cls(
            ideal_energy=doc["ideal_energy"],
            noisy_energies={float(p): e for p, e in doc["noisy_energies"].items()},
            device_energy=doc["device_energy"],
            nn_prediction=doc["nn_prediction"],
            baseline_linear=doc["baseline_linear"],
            baseline_richardson=doc["baseline_richardson"],
            baseline_poly2=doc["baseline_poly2"],
            seed=doc["seed"],
            config=doc["config"],
            tool_version=doc["tool_version"],
        )


@dataclass
class PipelineResult:
    config: ExperimentConfig
    grid: ThetaGrid
    ideal: ScanResult
    noisy: dict[float, ScanResult]
    dataset: TrainingDataset
    params: MlpParameters
    metrics: TrainingMetrics
    device: ScanResult
    report: Report
    paths: dict[str, Path] = field(default_factory=dict)


def scan_filename(kind: str, p: float | None = None) -> str:
    if kind == "noisy":
        return f"scan_noisy_p{p!r}.csv"
    return f"scan_{kind}.csv"


def build_grid(cfg: ExperimentConfig) -> ThetaGrid:
    return make_theta_grid(cfg.n_qubits, cfg.points_per_axis)


def run_noisy_scans(cfg, grid, levels, workers=1) -> dict[float, ScanResult]:
    obs = z_string(cfg.n_qubits)
    return {
        p: scan_noisy(grid, cfg.n_qubits, obs, p, NoiseModel(p, cfg.filter_set), workers=workers)
        for p in levels
    }


def dataset_from_scans(scans: dict[float, ScanResult]) -> TrainingDataset:
    return TrainingDataset.from_pairs((p, min_energy(s).energy) for p, s in scans.items())


def run_device_scan(cfg, grid, workers=1) -> ScanResult:
    p = cfg.device_p
    return scan_sampled(
        grid, cfg.n_qubits, z_string(cfg.n_qubits), p, NoiseModel(p, cfg.filter_set),
        cfg.shots, cfg.estimator, cfg.master_seed, workers=workers,
    )


def train_model(cfg, dataset) -> tuple[MlpParameters, TrainingMetrics]:
    params = init_mlp(cfg.layer_sizes, cfg.master_seed)
    return train(dataset, params, cfg.adam, cfg.epochs)


def model_metadata(cfg, metrics) -> dict:
    return {
        "seed": cfg.master_seed,
        "epochs": metrics.epochs,
        "final_loss": metrics.final_loss,
        "adam": {
            "alpha": cfg.adam_alpha,
            "beta1": cfg.adam_beta1,
            "beta2": cfg.adam_beta2,
            "epsilon": cfg.adam_epsilon,
            "bias_correction": cfg.adam_bias_correction,
        },
        "losses": metrics.losses,
    }


def baselines(dataset: TrainingDataset) -> dict[str, float | None]:
    poly2 = fit_polynomial(dataset, 2)[0] if len(dataset) >= 3 else None
    return {
        "baseline_linear": fit_linear(dataset)[0],
        "baseline_richardson": richardson_extrapolate(dataset),
        "baseline_poly2": None if poly2 is None else float(poly2),
    }


class _Stages:
    """Tracks the current stage and the files written so far."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    @contextmanager
    def stage(self, name: str):
        log.info("stage %s", name)
        try:
            yield
        except Exception as exc:
            self._mark_partial()
            raise PipelineError(name, exc) from exc

    def write(self, name: str, writer, *args) -> Path:
        path = writer(*args, self.out_dir / name)
        self.written.append(path)
        return path

    def _mark_partial(self):
        for path in self.written:
            if path.exists():
                os.replace(path, path.with_name(path.name + ".partial"))


def run_pipeline(cfg: ExperimentConfig, out_dir=None, workers: int = 1) -> PipelineResult:
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    st = _Stages(out)
    paths = {}

    with st.stage("scan_ideal"):
        grid = build_grid(cfg)
        ideal = scan_ideal(grid, cfg.n_qubits, z_string(cfg.n_qubits), workers=workers)
        paths["scan_ideal"] = st.write(scan_filename("ideal"), artifacts.write_scan_csv, ideal)

    with st.stage("scan_noisy"):
        noisy = run_noisy_scans(cfg, grid, cfg.noise_levels, workers)
        for p, scan in noisy.items():
            paths[f"scan_noisy_{p!r}"] = st.write(scan_filename("noisy", p), artifacts.write_scan_csv, scan)

    with st.stage("dataset"):
        extra = [p for p in cfg.training_levels if p not in noisy]
        training_scans = {**noisy, **run_noisy_scans(cfg, grid, extra, workers)}
        dataset = dataset_from_scans({p: training_scans[p] for p in cfg.training_levels})
        paths["dataset"] = st.write("dataset.csv", artifacts.write_dataset_csv, dataset)

    with st.stage("train"):
        params, metrics = train_model(cfg, dataset)
        nn_prediction = predict_zero_noise(params)
        paths["model"] = st.write(
            "model.json", artifacts.write_model_json, params, model_metadata(cfg, metrics)
        )

    with st.stage("baselines"):
        base = baselines(dataset)

    with st.stage("scan_device"):
        device = run_device_scan(cfg, grid, workers)
        paths["scan_device"] = st.write(scan_filename(DEVICE_LABEL), artifacts.write_scan_csv, device)

    with st.stage("report"):
        report = Report(
            ideal_energy=min_energy(ideal).energy,
            noisy_energies={p: min_energy(s).energy for p, s in noisy.items()},
            device_energy=min_energy(device).energy,
            nn_prediction=nn_prediction,
            seed=cfg.master_seed,
            config=cfg.echo(),
            **base,
        )
        result = PipelineResult(cfg, grid, ideal, noisy, dataset, params, metrics, device, report, paths)
        paths.update(emit_plot_data(result, out, st))
        paths["report"] = st.write("report.json", artifacts.write_report_json, report)
    return result


def emit_plot_data(result: PipelineResult, out_dir, stages: _Stages | None = None) -> dict[str, Path]:
    """Data series behind the training, comparison and extrapolation figures."""
    out_dir = Path(out_dir)
    write = stages.write if stages else (lambda name, fn, *a: fn(*a, out_dir / name))

    def series(name, header, rows):
        return write(name, lambda rows_, path: artifacts.write_series_csv(path, header, rows_), rows)

    paths = {}
    paths["plot_training_curve"] = series(
        "plot_training_curve.csv", ["epoch", "loss"],
        [(k, float(loss)) for k, loss in enumerate(result.metrics.losses)],
    )
    diffs = delta_e(result.device, result.ideal)
    paths["plot_comparison"] = series(
        "plot_comparison.csv", ["grid_index", "e_ideal", "e_sampled", "delta_e"],
        [
            (i, float(result.ideal.expectations[i]), float(result.device.expectations[i]), d)
            for i, d in diffs
        ],
    )
    paths["plot_extrapolation_points"] = series(
        "plot_extrapolation_points.csv", ["noise_p", "min_energy"],
        [(float(p), float(r)) for p, r in result.dataset.pairs()],
    )
    ps = np.linspace(0.0, max(result.dataset.noise_p), CURVE_POINTS)
    nn = forward(result.params, ps)
    intercept, slope = fit_linear(result.dataset)
    linear = intercept + slope * ps
    rich = lagrange_eval(result.dataset, ps)
    header = ["noise_p", "nn", "linear", "richardson"]
    columns = [ps, nn, linear, rich]
    if len(result.dataset) >= 3:
        header.append("poly2")
        columns.append(eval_polynomial(fit_polynomial(result.dataset, 2), ps))
    paths["plot_extrapolation_curves"] = series(
        "plot_extrapolation_curves.csv", header,
        [tuple(float(c[k]) for c in columns) for k in range(CURVE_POINTS)],
    )
    return paths
