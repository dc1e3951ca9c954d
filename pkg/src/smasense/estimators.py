"""Learned predictors over the self-sensing signals.

Two families:

* Pose / actuator-force self-sensing under no contact: F_SMA = g(T, R)
  with separate polynomial fits for the cold and hot operating ranges,
  switched by the (T < T_split) and (R > R_split) rule.  Predicting the
  bend angle is the beam inverse of the predicted force.
* External contact force during contact: F_ext = f(signals) with a
  cubic polynomial over a chosen subset of {R, T, theta}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import beam, poly

T_SPLIT_DEFAULT = 100.0   # degC
R_SPLIT_DEFAULT = 1.7     # ohm

SIGNAL_SUBSETS = {
    "rttheta": ("R", "T", "theta"),
    "rtheta": ("R", "theta"),
    "ttheta": ("T", "theta"),
}

_COLUMN_OF = {"R": "r_ohm", "T": "t_degc", "theta": "theta_rad"}


class FitError(RuntimeError):
    """A regression could not be fit (empty partition, bad subset, ...)."""


@dataclass(frozen=True)
class LabelResult:
    """Outcome of converting measured angles to muscle-force labels."""

    f_sma: np.ndarray
    kept: np.ndarray          # indices of rows that passed the angle range check
    n_rejected: int


def label_sma_force(theta: np.ndarray, limb: beam.LimbParams) -> LabelResult:
    """Muscle-force labels zeta*sin^2(theta)/theta from measured angles.

    Rows with theta outside [0, pi/2] are rejected and counted rather
    than raising, since a noisy angle sensor owns that failure mode.
    """
    theta = np.asarray(theta, dtype=float)
    ok = (theta >= 0.0) & (theta <= np.pi / 2.0)
    kept = np.flatnonzero(ok)
    th = theta[kept]
    ratio = np.divide(np.sin(th) ** 2, th, out=np.zeros_like(th), where=th != 0.0)
    return LabelResult(f_sma=limb.zeta * ratio, kept=kept, n_rejected=int((~ok).sum()))


def split_hot_cold(
    t_degc: np.ndarray,
    r_ohm: np.ndarray,
    t_split: float = T_SPLIT_DEFAULT,
    r_split: float = R_SPLIT_DEFAULT,
) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the cold rows (T < t_split and R > r_split) and the rest."""
    t_degc = np.asarray(t_degc, dtype=float)
    r_ohm = np.asarray(r_ohm, dtype=float)
    cold = (t_degc < t_split) & (r_ohm > r_split)
    return np.flatnonzero(cold), np.flatnonzero(~cold)


@dataclass(frozen=True)
class SwitchingModel:
    """Cold/hot pair of (T, R) polynomials with the switching rule."""

    cold: poly.PolyModel
    hot: poly.PolyModel
    limb: beam.LimbParams
    t_split: float = T_SPLIT_DEFAULT
    r_split: float = R_SPLIT_DEFAULT

    def __post_init__(self):
        if self.cold.var_names != ("T", "R") or self.hot.var_names != ("T", "R"):
            raise ValueError('switching models must be over var_names ("T", "R")')


def fit_pose_model(
    t_degc: np.ndarray,
    r_ohm: np.ndarray,
    f_sma: np.ndarray,
    limb: beam.LimbParams,
    m_cold: int = 2,
    m_hot: int = 2,
    t_split: float = T_SPLIT_DEFAULT,
    r_split: float = R_SPLIT_DEFAULT,
) -> SwitchingModel:
    """Independent least-squares fits on the cold and hot partitions."""
    cold_idx, hot_idx = split_hot_cold(t_degc, r_ohm, t_split, r_split)
    for name, idx in (("cold", cold_idx), ("hot", hot_idx)):
        if idx.size == 0:
            raise FitError(f"{name} partition is empty; cannot fit switching model")
    X = np.column_stack([t_degc, r_ohm]).astype(float)
    y = np.asarray(f_sma, dtype=float)
    cold = poly.fit_poly(X[cold_idx], y[cold_idx], m_cold, ("T", "R"))
    hot = poly.fit_poly(X[hot_idx], y[hot_idx], m_hot, ("T", "R"))
    return SwitchingModel(cold=cold, hot=hot, limb=limb, t_split=t_split, r_split=r_split)


def predict_sma_force(model: SwitchingModel, t_degc, r_ohm) -> np.ndarray:
    """Branch per the switching rule, then evaluate that polynomial."""
    t = np.atleast_1d(np.asarray(t_degc, dtype=float))
    r = np.atleast_1d(np.asarray(r_ohm, dtype=float))
    X = np.column_stack([t, r])
    cold_idx, hot_idx = split_hot_cold(t, r, model.t_split, model.r_split)
    out = np.empty(len(t))
    if cold_idx.size:
        out[cold_idx] = poly.predict_many(model.cold, X[cold_idx])
    if hot_idx.size:
        out[hot_idx] = poly.predict_many(model.hot, X[hot_idx])
    return out


def predict_pose(model: SwitchingModel, t_degc, r_ohm) -> np.ndarray:
    """Bend angle from the predicted muscle force, clamped to reachable.

    The estimator must stay total in the real-time loop, so predicted
    forces are clamped into [0, max invertible force] before the beam
    inverse instead of erroring on extrapolation.
    """
    f_hat = predict_sma_force(model, t_degc, r_ohm)
    f_hat = np.clip(f_hat, 0.0, model.limb.max_sma_force)
    return np.array([beam.angle_from_force(f, model.limb.zeta) for f in f_hat])


def contact_inputs(columns: dict[str, np.ndarray], subset: str) -> np.ndarray:
    """Stack the dataset columns named by a signal subset into K x n."""
    if subset not in SIGNAL_SUBSETS:
        raise FitError(f"unknown signal subset {subset!r}; expected one of {sorted(SIGNAL_SUBSETS)}")
    return np.column_stack([columns[_COLUMN_OF[v]] for v in SIGNAL_SUBSETS[subset]]).astype(float)


def fit_contact_model(
    columns: dict[str, np.ndarray], f_ext: np.ndarray, subset: str, degree: int = 3
) -> poly.PolyModel:
    """Least-squares polynomial for F_ext over the chosen signal subset."""
    X = contact_inputs(columns, subset)
    return poly.fit_poly(X, np.asarray(f_ext, dtype=float), degree, SIGNAL_SUBSETS[subset])


@dataclass(frozen=True)
class FoldErrors:
    fold: int
    n_test: int
    train_mae: float
    test_mae: float
    test_pct: float


@dataclass(frozen=True)
class ErrorReport:
    """Average errors in the dataset's own divisor convention.

    mean_abs_error = sum_k |e(k)| / (K - 1) and mean_pct_error divides
    each |e(k)| by max(F(k), F_floor) before the same averaging; the
    K - 1 divisor matches the convention the headline numbers use.
    """

    mean_abs_error: float
    mean_pct_error: float
    n_samples: int
    folds: tuple[FoldErrors, ...] = field(default_factory=tuple)


F_FLOOR_N = 0.05


def mean_errors(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[float, float]:
    """(mean abs error, mean percent error) with the K-1 divisor."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    k = y_true.size
    if k < 2:
        raise ValueError("need at least 2 samples to average with the K-1 divisor")
    e = np.abs(y_pred - y_true)
    mae = float(e.sum() / (k - 1))
    pct = float((e / np.maximum(y_true, F_FLOOR_N)).sum() / (k - 1)) * 100.0
    return mae, pct


def evaluate(predict_fn, X: np.ndarray, y_true: np.ndarray) -> ErrorReport:
    """Apply a predictor to X and report its average errors on y_true."""
    y_pred = np.asarray(predict_fn(X), dtype=float)
    mae, pct = mean_errors(y_true, y_pred)
    return ErrorReport(mean_abs_error=mae, mean_pct_error=pct, n_samples=int(np.size(y_true)))


def cross_validate(
    fit_fn, predict_fn, X: np.ndarray, y: np.ndarray, folds: int, seed: int,
    shuffle: bool = True,
) -> ErrorReport:
    """K-fold cross validation of an arbitrary fit/predict pair.

    fit_fn(X_train, y_train) -> model; predict_fn(model, X) -> y_hat.
    The report's headline numbers are means over the fold test errors.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    fold_rows = []
    for fold, (tr, te) in enumerate(poly.kfold_split(y.size, folds, seed, shuffle=shuffle)):
        model = fit_fn(X[tr], y[tr])
        train_mae, _ = mean_errors(y[tr], predict_fn(model, X[tr]))
        test_mae, test_pct = mean_errors(y[te], predict_fn(model, X[te]))
        fold_rows.append(FoldErrors(fold, te.size, train_mae, test_mae, test_pct))
    return ErrorReport(
        mean_abs_error=float(np.mean([f.test_mae for f in fold_rows])),
        mean_pct_error=float(np.mean([f.test_pct for f in fold_rows])),
        n_samples=int(y.size),
        folds=tuple(fold_rows),
    )
