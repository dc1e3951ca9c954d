"""File formats: datasets, models, calibrations, reports, and config.

Datasets are diff-able comma-separated text with a commented header
block; models, calibrations and reports are JSON; scenario/config
overrides are one YAML tree.  All writers are deterministic: floats are
serialized with repr (shortest round-trip, >= 15 significant digits)
and no wall-clock metadata is ever embedded, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import beam, detector, estimators, poly

DATASET_SCHEMA = "smasense-dataset v1"
MODEL_SCHEMA = "smasense-model v1"
CALIBRATION_SCHEMA = "smasense-calibration v1"
REPORT_SCHEMA = "smasense-report v1"

DATASET_COLUMNS = (
    "k", "t_s", "V_volts", "i_amps", "R_ohm", "T_degC", "theta_rad", "F_ext_N", "contact",
)


class DatasetFormatError(ValueError):
    """A dataset file failed to parse; message names the line."""


class ValidationError(ValueError):
    """A dataset violated a physical-range or consistency invariant."""


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class Dataset:
    """In-memory dataset: header metadata plus column arrays."""

    meta: dict[str, str]
    k: np.ndarray
    t_s: np.ndarray
    v_volts: np.ndarray
    i_amps: np.ndarray
    r_ohm: np.ndarray
    t_degc: np.ndarray
    theta_rad: np.ndarray
    f_ext_n: np.ndarray
    contact: np.ndarray

    def __len__(self) -> int:
        return int(self.k.size)

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "r_ohm": self.r_ohm,
            "t_degc": self.t_degc,
            "theta_rad": self.theta_rad,
        }


def dataset_from_rows(meta: dict[str, str], rows) -> Dataset:
    """Build a Dataset from an iterable of 9-tuples in column order."""
    arr = np.asarray(list(rows), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != len(DATASET_COLUMNS):
        raise ValueError(f"rows must have {len(DATASET_COLUMNS)} columns")
    return Dataset(
        meta=dict(meta),
        k=arr[:, 0].astype(int),
        t_s=arr[:, 1],
        v_volts=arr[:, 2],
        i_amps=arr[:, 3],
        r_ohm=arr[:, 4],
        t_degc=arr[:, 5],
        theta_rad=arr[:, 6],
        f_ext_n=arr[:, 7],
        contact=arr[:, 8] > 0.5,
    )


def write_dataset(ds: Dataset, path) -> None:
    lines = [f"# {DATASET_SCHEMA}"]
    for key, value in ds.meta.items():
        lines.append(f"# {key}: {value}")
    lines.append("# columns: " + ",".join(DATASET_COLUMNS))
    for i in range(len(ds)):
        lines.append(
            ",".join(
                (
                    str(int(ds.k[i])),
                    _fmt(ds.t_s[i]),
                    _fmt(ds.v_volts[i]),
                    _fmt(ds.i_amps[i]),
                    _fmt(ds.r_ohm[i]),
                    _fmt(ds.t_degc[i]),
                    _fmt(ds.theta_rad[i]),
                    _fmt(ds.f_ext_n[i]),
                    "1" if ds.contact[i] else "0",
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_dataset(path) -> Dataset:
    path = Path(path)
    meta: dict[str, str] = {}
    rows = []
    with path.open() as fh:
        first = fh.readline().rstrip("\n")
        if first != f"# {DATASET_SCHEMA}":
            raise DatasetFormatError(
                f"{path}:1: unknown schema {first!r}; expected '# {DATASET_SCHEMA}'"
            )
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("# columns:"):
                cols = line.split(":", 1)[1].strip()
                if cols != ",".join(DATASET_COLUMNS):
                    raise DatasetFormatError(f"{path}:{lineno}: unexpected column set {cols!r}")
                continue
            if line.startswith("# "):
                key, sep, value = line[2:].partition(": ")
                if not sep:
                    raise DatasetFormatError(f"{path}:{lineno}: malformed header line")
                meta[key] = value
                continue
            parts = line.split(",")
            if len(parts) != len(DATASET_COLUMNS):
                raise DatasetFormatError(
                    f"{path}:{lineno}: expected {len(DATASET_COLUMNS)} fields, got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise DatasetFormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DatasetFormatError(f"{path}: no data rows")
    return dataset_from_rows(meta, rows)


# Noise slack for range checks: a hard 3-sigma bound falsely rejects
# roughly half of all valid 600-row datasets, so the validator allows
# 6 sigma around the physical bounds instead.
NOISE_SLACK_SIGMA = 6.0


def validate_dataset(ds: Dataset) -> None:
    """Physical-range and consistency checks; raises ValidationError."""
    if len(ds) == 0:
        raise ValidationError("dataset is empty")
    if not np.all(np.diff(ds.k) > 0):
        bad = int(np.flatnonzero(np.diff(ds.k) <= 0)[0]) + 1
        raise ValidationError(f"row {bad}: k is not strictly increasing")
    sigma_t = float(ds.meta.get("sigma_t", 0.5))
    ambient = float(ds.meta.get("ambient_degc", 22.0))
    checks = [
        ("R_ohm > 0", ds.r_ohm > 0.0),
        ("theta_rad in [0, pi/2]", (ds.theta_rad >= 0.0) & (ds.theta_rad <= np.pi / 2)),
        ("F_ext_N >= 0", ds.f_ext_n >= 0.0),
        ("contact label consistent with F_ext > 0", ds.contact == (ds.f_ext_n > 0.0)),
        ("T above ambient", ds.t_degc >= ambient - NOISE_SLACK_SIGMA * sigma_t),
    ]
    if "t_max_degc" in ds.meta:
        t_max = float(ds.meta["t_max_degc"])
        # 1e-6 absorbs float rounding of the supervisor fixed point when
        # sigma_t is zero
        bound = t_max + NOISE_SLACK_SIGMA * sigma_t + 1e-6
        checks.append(("T below supervised limit", ds.t_degc <= bound))
    for label, ok in checks:
        if not np.all(ok):
            row = int(np.flatnonzero(~ok)[0])
            raise ValidationError(f"row {row}: {label} violated")


def content_hash(obj) -> str:
    """Stable short hash of a JSON-serializable description."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------------------
# models


def _limb_to_dict(limb: beam.LimbParams) -> dict:
    return {
        "elastic_modulus": limb.elastic_modulus,
        "width": limb.width,
        "thickness": limb.thickness,
        "length": limb.length,
        "moment_arm": limb.moment_arm,
    }


def _limb_from_dict(d: dict) -> beam.LimbParams:
    return beam.LimbParams(
        elastic_modulus=d["elastic_modulus"],
        width=d["width"],
        thickness=d["thickness"],
        length=d["length"],
        moment_arm=d["moment_arm"],
    )


def _poly_to_dict(model: poly.PolyModel) -> dict:
    return {
        "var_names": list(model.var_names),
        "degree": model.degree,
        "monomial_order": model.monomial_order,
        "weights": [float(w) for w in model.weights],
    }


def _poly_from_dict(d: dict) -> poly.PolyModel:
    return poly.PolyModel(
        var_names=tuple(d["var_names"]),
        degree=int(d["degree"]),
        weights=np.asarray(d["weights"], dtype=float),
        monomial_order=d["monomial_order"],
    )


def write_model(model, path) -> None:
    if isinstance(model, estimators.SwitchingModel):
        doc = {
            "schema": MODEL_SCHEMA,
            "kind": "switching",
            "t_split": model.t_split,
            "r_split": model.r_split,
            "limb": _limb_to_dict(model.limb),
            "cold": _poly_to_dict(model.cold),
            "hot": _poly_to_dict(model.hot),
        }
    elif isinstance(model, poly.PolyModel):
        doc = {"schema": MODEL_SCHEMA, "kind": "poly", **_poly_to_dict(model)}
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_model(path):
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != MODEL_SCHEMA:
        raise ValueError(f"{path}: unknown model schema {doc.get('schema')!r}")
    if doc["kind"] == "poly":
        return _poly_from_dict(doc)
    if doc["kind"] == "switching":
        return estimators.SwitchingModel(
            cold=_poly_from_dict(doc["cold"]),
            hot=_poly_from_dict(doc["hot"]),
            limb=_limb_from_dict(doc["limb"]),
            t_split=float(doc["t_split"]),
            r_split=float(doc["r_split"]),
        )
    raise ValueError(f"{path}: unknown model kind {doc['kind']!r}")


# ---------------------------------------------------------------------------
# calibration and reports


def write_calibration(result: detector.CalibrationResult, path) -> None:
    doc = {
        "schema": CALIBRATION_SCHEMA,
        "f_thresh_star": result.f_thresh_star,
        "criterion": result.criterion,
        "metric_curves": [
            {"f_thresh": m.f_thresh, "precision": m.precision, "recall": m.recall, "f1": m.f1}
            for m in result.metric_curves
        ],
        "t_max_operational": result.t_max_operational,
        "tmax_table": [
            {"t_max": r.t_max, "n_rows": r.n_rows, "mae": r.mae, "skipped": r.skipped}
            for r in result.tmax_table
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_calibration(path) -> detector.CalibrationResult:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != CALIBRATION_SCHEMA:
        raise ValueError(f"{path}: unknown calibration schema {doc.get('schema')!r}")
    return detector.CalibrationResult(
        f_thresh_star=float(doc["f_thresh_star"]),
        criterion=doc["criterion"],
        metric_curves=tuple(
            detector.MetricPoint(m["f_thresh"], m["precision"], m["recall"], m["f1"])
            for m in doc["metric_curves"]
        ),
        t_max_operational=doc.get("t_max_operational"),
        tmax_table=tuple(
            detector.TmaxRow(r["t_max"], r["n_rows"], r["mae"], r["skipped"])
            for r in doc.get("tmax_table", [])
        ),
    )


def report_to_dict(report: estimators.ErrorReport, kind: str, extra: dict | None = None) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": kind,
        "mean_abs_error": report.mean_abs_error,
        "mean_pct_error": report.mean_pct_error,
        "n_samples": report.n_samples,
        "folds": [
            {
                "fold": f.fold,
                "n_test": f.n_test,
                "train_mae": f.train_mae,
                "test_mae": f.test_mae,
                "test_pct": f.test_pct,
            }
            for f in report.folds
        ],
        "extra": extra or {},
    }


def write_report(doc: dict, path) -> None:
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError("report documents must carry the report schema")
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_report(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"{path}: unknown report schema {doc.get('schema')!r}")
    return doc


# ---------------------------------------------------------------------------
# config overrides (one human-editable YAML tree)


def load_config(path) -> dict:
    doc = yaml.safe_load(Path(path).read_text())
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config must be a mapping")
    return doc
