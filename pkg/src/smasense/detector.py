"""Binary/3-level contact classification and its data-driven calibration.

A contact detector is just a threshold on the estimated external force.
Calibration sweeps the threshold over a grid, scores each detector
against ground-truth contact labels, and keeps the argmax of the chosen
statistic.  A companion sweep over the temperature cap T_max locates
the operational limit past which the resistance-based predictor stops
being interchangeable with the temperature-based one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import estimators, poly


def classify(f_ext_hat, f_thresh: float):
    """Contact iff the estimated force strictly exceeds the threshold."""
    return np.asarray(f_ext_hat, dtype=float) > f_thresh


LED_NONE = "none"
LED_CONTACT = "contact"
LED_HIGH = "high"


def classify3(f_ext_hat: float, t_lo: float, t_hi: float) -> str:
    """Three-level contact state used by the live demo."""
    if t_lo >= t_hi:
        raise ValueError("t_lo must be < t_hi")
    if f_ext_hat > t_hi:
        return LED_HIGH
    if f_ext_hat > t_lo:
        return LED_CONTACT
    return LED_NONE


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion(predictions, truth) -> ConfusionCounts:
    """Standard confusion counts; truth is the simulator constraint label."""
    predictions = np.asarray(predictions, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if predictions.shape != truth.shape:
        raise ValueError("predictions and truth must have equal length")
    return ConfusionCounts(
        tp=int(np.sum(predictions & truth)),
        fp=int(np.sum(predictions & ~truth)),
        fn=int(np.sum(~predictions & truth)),
        tn=int(np.sum(~predictions & ~truth)),
    )


def precision_recall_f1(c: ConfusionCounts) -> tuple[float, float, float]:
    """Pre = TP/(TP+FP), Rec = TP/(TP+FN), F1 = 2*Pre*Rec/(Pre+Rec); 0/0 -> 0."""
    pre = c.tp / (c.tp + c.fp) if (c.tp + c.fp) else 0.0
    rec = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else 0.0
    f1 = 2.0 * pre * rec / (pre + rec) if (pre + rec) else 0.0
    return pre, rec, f1


@dataclass(frozen=True)
class MetricPoint:
    f_thresh: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class CalibrationResult:
    """Chosen threshold plus the metric curves that justified it."""

    f_thresh_star: float
    criterion: str
    metric_curves: tuple[MetricPoint, ...]
    t_max_operational: float | None = None
    tmax_table: tuple["TmaxRow", ...] = field(default_factory=tuple)


def default_threshold_grid() -> np.ndarray:
    """0 to 0.2 N in 0.005 N steps."""
    return np.round(np.arange(0.0, 0.2000001, 0.005), 6)


def calibrate_threshold(
    f_ext_hat, truth, grid=None, criterion: str = "f1"
) -> CalibrationResult:
    """Sweep thresholds, score each detector, keep the argmax.

    Ties are broken toward the larger threshold (the more conservative
    detector).
    """
    if criterion not in ("f1", "precision"):
        raise ValueError("criterion must be 'f1' or 'precision'")
    grid = default_threshold_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("threshold grid must be non-empty")
    scores = np.asarray(f_ext_hat, dtype=float)
    truth = np.asarray(truth, dtype=bool)
    curves = []
    for t in grid:
        pre, rec, f1 = precision_recall_f1(confusion(scores > t, truth))
        curves.append(MetricPoint(float(t), pre, rec, f1))
    key = {"f1": lambda m: m.f1, "precision": lambda m: m.precision}[criterion]
    best = max(curves, key=lambda m: (key(m), m.f_thresh))
    return CalibrationResult(
        f_thresh_star=best.f_thresh, criterion=criterion, metric_curves=tuple(curves)
    )


@dataclass(frozen=True)
class TmaxRow:
    t_max: float
    n_rows: int
    mae: dict[str, float]     # per signal subset; NaN when the fit was skipped
    skipped: bool = False


DIVERGENCE_RATIO = 1.5

# Low temperature caps keep so few contact rows that both subset errors
# are near zero and their ratio is noise; a bucket only breaks the
# interchangeability scan when the resistance model is worse by a
# meaningful absolute margin as well.
DIVERGENCE_ABS_TOL_N = 0.02


def default_tmax_grid() -> np.ndarray:
    """60 to 130 degC in 5 degC steps."""
    return np.arange(60.0, 130.0 + 1e-9, 5.0)


def sweep_tmax(
    columns: dict[str, np.ndarray],
    f_ext: np.ndarray,
    subsets=("rttheta", "rtheta", "ttheta"),
    t_grid=None,
    degree: int = 3,
    folds: int = 3,
    seed: int = 0,
    divergence_ratio: float = DIVERGENCE_RATIO,
) -> tuple[list[TmaxRow], float | None]:
    """Cross-validated contact-model error per temperature cap.

    For each T_max, rows with measured T <= T_max are kept and each
    signal subset gets a fresh cross-validated cubic fit.  The
    operational limit is the largest grid value up to which (at every
    grid point so far) the resistance model's error stays within
    divergence_ratio of the temperature model's error; it needs both
    'rtheta' and 'ttheta' in the sweep.
    """
    t_grid = default_tmax_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    t_meas = np.asarray(columns["t_degc"], dtype=float)
    f_ext = np.asarray(f_ext, dtype=float)
    rows: list[TmaxRow] = []
    min_rows = folds * 2
    for t_max in t_grid:
        keep = np.flatnonzero(t_meas <= t_max)
        if keep.size < min_rows:
            rows.append(TmaxRow(float(t_max), int(keep.size), {}, skipped=True))
            continue
        sub_cols = {k: np.asarray(v)[keep] for k, v in columns.items()}
        mae = {}
        for subset in subsets:
            X = estimators.contact_inputs(sub_cols, subset)
            names = estimators.SIGNAL_SUBSETS[subset]
            report = estimators.cross_validate(
                lambda Xtr, ytr: poly.fit_poly(Xtr, ytr, degree, names),
                poly.predict_many,
                X, f_ext[keep], folds=folds, seed=seed,
            )
            mae[subset] = report.mean_abs_error
        rows.append(TmaxRow(float(t_max), int(keep.size), mae))

    limit = None
    if "rtheta" in subsets and "ttheta" in subsets:
        for row in rows:
            if row.skipped:
                continue
            interchangeable = row.mae["rtheta"] <= max(
                divergence_ratio * row.mae["ttheta"],
                row.mae["ttheta"] + DIVERGENCE_ABS_TOL_N,
            )
            if interchangeable:
                limit = row.t_max
            else:
                break
    return rows, limit
