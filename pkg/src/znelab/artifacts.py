"""On-disk formats: scan/dataset/series CSVs, model and report JSON.

All writes are atomic (temporary file in the target directory, then
rename).  Floats are written with 17 significant digits, which round-trips
IEEE doubles exactly.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ansatz import ThetaGrid
from .errors import ArtifactIOError
from .extrapolator import MlpParameters, TrainingDataset
from .vqe import ScanResult

MODEL_FORMAT = "znelab-mlp"
MODEL_VERSION = 1


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    parent = path.parent
    if not parent.is_dir():
        raise ArtifactIOError(f"output directory does not exist: {parent}", path=path)
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise ArtifactIOError(f"cannot write {path}: {exc}", path=path) from exc
    return path


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_csv(path) -> tuple[list[str], list[list[str]]]:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ArtifactIOError(f"cannot read {path}: {exc}", path=path) from exc
    if not rows:
        raise ArtifactIOError(f"empty CSV file: {path}", path=path)
    return rows[0], rows[1:]


def write_series_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Generic numeric series; floats formatted with 17 significant digits."""
    out = [[fmt(v) if isinstance(v, (float, np.floating)) else v for v in row] for row in rows]
    return atomic_write_text(path, _csv_text(header, out))


# -- scans --------------------------------------------------------------------


def scan_header(n_qubits: int) -> list[str]:
    thetas = [f"theta_{k}" for k in range(2 * n_qubits)]
    return ["grid_index", *thetas, "noise_p", "shots", "mode", "expectation"]


def write_scan_csv(scan: ScanResult, path) -> Path:
    noise = "" if scan.noise_p is None else fmt(scan.noise_p)
    shots = "" if scan.shots is None else str(scan.shots)
    rows = (
        [str(i), *(fmt(t) for t in theta), noise, shots, scan.mode, fmt(e)]
        for i, (theta, e) in enumerate(zip(scan.grid, scan.expectations))
    )
    return atomic_write_text(path, _csv_text(scan_header(scan.grid.n), rows))


def read_scan_csv(path, grid: ThetaGrid) -> ScanResult:
    """Re-read a scan taken on ``grid``; theta columns are checked against it."""
    header, rows = _read_csv(path)
    if header != scan_header(grid.n):
        raise ArtifactIOError(f"{path}: unexpected scan header {header}", path=path)
    if len(rows) != len(grid):
        raise ArtifactIOError(f"{path}: {len(rows)} rows for a {len(grid)}-point grid", path=path)
    values = np.empty(len(rows))
    for k, row in enumerate(rows):
        if int(row[0]) != k:
            raise ArtifactIOError(f"{path}: grid_index out of order at row {k}", path=path)
        if tuple(float(t) for t in row[1 : 1 + grid.dimension]) != grid.theta(k):
            raise ArtifactIOError(f"{path}: row {k} angles do not match the grid", path=path)
        values[k] = float(row[-1])
    last = rows[-1]
    noise = float(last[-4]) if last[-4] else None
    shots = int(last[-3]) if last[-3] else None
    return ScanResult(last[-2], grid, values, noise_p=noise, shots=shots)


# -- dataset ------------------------------------------------------------------

DATASET_HEADER = ["noise_p", "min_expectation"]


def write_dataset_csv(dataset: TrainingDataset, path) -> Path:
    rows = ([fmt(p), fmt(r)] for p, r in dataset.pairs())
    return atomic_write_text(path, _csv_text(DATASET_HEADER, rows))


def read_dataset_csv(path) -> TrainingDataset:
    header, rows = _read_csv(path)
    if header != DATASET_HEADER:
        raise ArtifactIOError(f"{path}: expected header {DATASET_HEADER}, got {header}", path=path)
    return TrainingDataset.from_pairs((float(p), float(r)) for p, r in rows)


# -- model --------------------------------------------------------------------


def model_document(params: MlpParameters, metadata: dict) -> dict:
    n_layers = len(params.weights)
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "layer_sizes": list(params.layer_sizes),
        "activations": ["relu"] * (n_layers - 1) + ["linear"],
        "weights": [w.tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
        "training": metadata,
    }


def write_model_json(params: MlpParameters, metadata: dict, path) -> Path:
    text = json.dumps(model_document(params, metadata), separators=(",", ":")) + "\n"
    return atomic_write_text(path, text)


def read_model_json(path) -> tuple[MlpParameters, dict]:
    doc = read_json(path)
    if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
        raise ArtifactIOError(f"{path}: not a {MODEL_FORMAT} v{MODEL_VERSION} document", path=path)
    params = MlpParameters(
        tuple(doc["layer_sizes"]),
        [np.array(w, dtype=float) for w in doc["weights"]],
        [np.array(b, dtype=float) for b in doc["biases"]],
    )
    return params, doc.get("training", {})


# -- json ---------------------------------------------------------------------


def report_schema() -> dict:
    """The JSON Schema that every report.json validates against."""
    text = resources.files("znelab").joinpath("schemas/report.schema.json").read_text("utf-8")
    return json.loads(text)


def write_report_json(report, path) -> Path:
    doc = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    return write_json(doc, path)


def write_json(obj, path) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def read_json(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ArtifactIOError(f"cannot read {path}: {exc}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise ArtifactIOError(f"{path}: invalid JSON: {exc}", path=path) from exc
