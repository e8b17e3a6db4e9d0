"""``znelab`` command line.

Exit codes: 0 success, 2 config/validation error, 3 numeric/training
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, artifacts, pipeline
from .config import ExperimentConfig, config_from_mapping, load_config
from .errors import (
    ArtifactIOError,
    CapacityError,
    ConfigError,
    InvalidArgumentError,
    NumericError,
    PipelineError,
)
from .extrapolator import TrainingMetrics, predict_zero_noise
from .observables import z_string
from .vqe import min_energy, scan_ideal

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="TOML config file")
    sub.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    sub.add_argument("--seed", type=int, dest="master_seed", help="master seed")
    sub.add_argument("--n-qubits", type=int, dest="n_qubits")
    sub.add_argument("--points-per-axis", type=int, dest="points_per_axis")
    sub.add_argument("--workers", type=int, default=1, help="scan worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="znelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"znelab {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("scan-ideal", help="noise-free grid scan")
    _common(sub)

    sub = subs.add_parser("scan-noisy", help="exact density-matrix scans")
    _common(sub)
    sub.add_argument("--p", type=_float_list, dest="noise_levels", help="e.g. 0.01,0.03")

    sub = subs.add_parser("scan-device", help="simulated device: noise plus shot sampling")
    _common(sub)
    sub.add_argument("--shots", type=int)
    sub.add_argument("--estimator", choices=["parity", "paper00"])
    sub.add_argument("--p", type=float, dest="device_noise_p")

    sub = subs.add_parser("gen-dataset", help="noisy scans -> dataset.csv")
    _common(sub)
    sub.add_argument("--p", type=_float_list, dest="noise_levels")

    sub = subs.add_parser("train", help="train the extrapolation network on dataset.csv")
    _common(sub)
    sub.add_argument("--dataset", type=Path)
    sub.add_argument("--epochs", type=int)

    sub = subs.add_parser("extrapolate", help="zero-noise estimates from dataset and model")
    _common(sub)
    sub.add_argument("--dataset", type=Path)
    sub.add_argument("--model", type=Path)

    sub = subs.add_parser("run-all", help="full pipeline")
    _common(sub)
    sub.add_argument("--shots", type=int)
    sub.add_argument("--estimator", choices=["parity", "paper00"])
    sub.add_argument("--epochs", type=int)

    sub = subs.add_parser("report", help="print a summary of report.json")
    _common(sub)
    sub.add_argument("--json", action="store_true", help="print the raw document")

    sub = subs.add_parser("plot-data", help="re-emit plot series from a run directory")
    _common(sub)
    return parser


_CONFIG_FLAGS = (
    "master_seed", "n_qubits", "points_per_axis", "noise_levels", "shots", "estimator",
    "device_noise_p", "epochs",
)


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {k: getattr(args, k, None) for k in _CONFIG_FLAGS}
    if args.out is not None:
        overrides["output_dir"] = str(args.out)
    return cfg.replace(**overrides)


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_scan_ideal(cfg, args):
    grid = pipeline.build_grid(cfg)
    scan = scan_ideal(grid, cfg.n_qubits, z_string(cfg.n_qubits), workers=args.workers)
    path = artifacts.write_scan_csv(scan, _out_dir(cfg) / pipeline.scan_filename("ideal"))
    gs = min_energy(scan)
    _print_json({"ideal_energy": gs.energy, "argmin_index": gs.argmin_index,
                 "argmin_theta": list(gs.argmin_theta), "points": len(grid), "csv": str(path)})


def cmd_scan_noisy(cfg, args):
    grid = pipeline.build_grid(cfg)
    out = _out_dir(cfg)
    scans = pipeline.run_noisy_scans(cfg, grid, cfg.noise_levels, args.workers)
    for p, scan in scans.items():
        artifacts.write_scan_csv(scan, out / pipeline.scan_filename("noisy", p))
    _print_json({repr(p): min_energy(s).energy for p, s in scans.items()})


def cmd_scan_device(cfg, args):
    grid = pipeline.build_grid(cfg)
    scan = pipeline.run_device_scan(cfg, grid, args.workers)
    path = artifacts.write_scan_csv(scan, _out_dir(cfg) / pipeline.scan_filename(pipeline.DEVICE_LABEL))
    _print_json({"device_energy": min_energy(scan).energy, "noise_p": scan.noise_p,
                 "shots": scan.shots, "estimator": scan.estimator, "csv": str(path)})


def cmd_gen_dataset(cfg, args):
    grid = pipeline.build_grid(cfg)
    scans = pipeline.run_noisy_scans(cfg, grid, cfg.training_levels, args.workers)
    dataset = pipeline.dataset_from_scans(scans)
    path = artifacts.write_dataset_csv(dataset, _out_dir(cfg) / "dataset.csv")
    _print_json({"dataset": str(path), "pairs": dataset.pairs()})


def _dataset_path(cfg, args) -> Path:
    return args.dataset if getattr(args, "dataset", None) else Path(cfg.output_dir) / "dataset.csv"


def cmd_train(cfg, args):
    dataset = artifacts.read_dataset_csv(_dataset_path(cfg, args))
    params, metrics = pipeline.train_model(cfg, dataset)
    out = _out_dir(cfg)
    artifacts.write_model_json(params, pipeline.model_metadata(cfg, metrics), out / "model.json")
    artifacts.write_series_csv(
        out / "plot_training_curve.csv", ["epoch", "loss"],
        [(k, float(loss)) for k, loss in enumerate(metrics.losses)],
    )
    _print_json({"nn_prediction": predict_zero_noise(params), "final_loss": metrics.final_loss,
                 "epochs": metrics.epochs, "model": str(out / "model.json")})


def cmd_extrapolate(cfg, args):
    dataset = artifacts.read_dataset_csv(_dataset_path(cfg, args))
    result = pipeline.baselines(dataset)
    model_path = args.model or Path(cfg.output_dir) / "model.json"
    if model_path.exists():
        params, _ = artifacts.read_model_json(model_path)
        result = {"nn_prediction": predict_zero_noise(params), **result}
    elif args.model:
        raise ArtifactIOError(f"model file not found: {model_path}", path=model_path)
    _print_json(result)


def cmd_run_all(cfg, args):
    result = pipeline.run_pipeline(cfg, workers=args.workers)
    _print_json(result.report.to_dict())


def _load_run(cfg) -> pipeline.PipelineResult:
    out = Path(cfg.output_dir)
    doc = artifacts.read_json(out / "report.json")
    run_cfg = config_from_mapping(doc["config"]).replace(output_dir=str(out))
    grid = pipeline.build_grid(run_cfg)
    ideal = artifacts.read_scan_csv(out / pipeline.scan_filename("ideal"), grid)
    device = artifacts.read_scan_csv(out / pipeline.scan_filename(pipeline.DEVICE_LABEL), grid)
    dataset = artifacts.read_dataset_csv(out / "dataset.csv")
    params, meta = artifacts.read_model_json(out / "model.json")
    metrics = TrainingMetrics(list(meta.get("losses", [])))
    report = pipeline.Report.from_dict(doc)
    return pipeline.PipelineResult(run_cfg, grid, ideal, {}, dataset, params, metrics, device, report)


def cmd_report(cfg, args):
    doc = artifacts.read_json(Path(cfg.output_dir) / "report.json")
    if args.json:
        _print_json(doc)
        return
    lines = [
        f"ideal ground-state energy     {doc['ideal_energy']:+.6f}",
        *(f"exact noisy minimum p={p:<8} {e:+.6f}" for p, e in doc["noisy_energies"].items()),
        f"{pipeline.DEVICE_LABEL} minimum      {doc['device_energy']:+.6f}",
        f"network zero-noise prediction {doc['nn_prediction']:+.6f}",
        f"linear / richardson baselines {doc['baseline_linear']:+.6f} / {doc['baseline_richardson']:+.6f}",
        f"|ideal - nn| = {doc['abs_err_nn']:.6f}   |ideal - device| = {doc['abs_err_device']:.6f}",
        f"network closer than device:   {doc['inequality_holds']}",
    ]
    print("\n".join(lines))


def cmd_plot_data(cfg, args):
    result = _load_run(cfg)
    paths = pipeline.emit_plot_data(result, cfg.output_dir)
    _print_json({k: str(v) for k, v in paths.items()})


COMMANDS = {
    "scan-ideal": cmd_scan_ideal,
    "scan-noisy": cmd_scan_noisy,
    "scan-device": cmd_scan_device,
    "gen-dataset": cmd_gen_dataset,
    "train": cmd_train,
    "extrapolate": cmd_extrapolate,
    "run-all": cmd_run_all,
    "report": cmd_report,
    "plot-data": cmd_plot_data,
}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, PipelineError):
        return exit_code_for(exc.cause)
    if isinstance(exc, (ConfigError, InvalidArgumentError, CapacityError)):
        return EXIT_CONFIG
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg, args)
    except Exception as exc:
        code = exit_code_for(exc)
        print(f"znelab: error: {exc}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
