"""Multivariate monomial expansion and least-squares fitting.

Every estimator in the pipeline is a polynomial over a small state
vector: expand the state into all monomials of total degree <= m, fit
weights by minimum-norm least squares (pseudoinverse), predict by dot
product.  The monomial order is fixed so serialized weight vectors are
portable: degree ascending, and within a degree lexicographic with the
first variable's exponent decreasing fastest-last (grlex).  For
x = [T, R], m = 2 this reads [1, T, R, T^2, T*R, R^2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

MONOMIAL_ORDER = "grlex"

# Relative singular-value cutoff for the pseudoinverse; raw signals
# (T ~ 1e2, R ~ 1e0, theta ~ 1e-1) are fit without centering, so keep
# the cutoff tight to preserve small but genuine directions.
SVD_RCOND = 1e-12


def count_monomials(n_vars: int, degree: int) -> int:
    """Number of monomials in n_vars variables of total degree <= degree."""
    return math.comb(n_vars + degree, n_vars)


def monomial_index_tuples(n_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Variable-index multisets for each monomial in canonical grlex order."""
    out: list[tuple[int, ...]] = []
    for d in range(degree + 1):
        out.extend(combinations_with_replacement(range(n_vars), d))
    return out


def expand_monomials(x, degree: int) -> np.ndarray:
    """Row of all monomials of x up to total degree, in canonical order."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("x must be a 1-D vector with at least one entry")
    out = np.empty(count_monomials(x.size, degree))
    for j, idx in enumerate(monomial_index_tuples(x.size, degree)):
        v = 1.0
        for i in idx:
            v *= x[i]
        out[j] = v
    return out


def expand_matrix(X: np.ndarray, degree: int) -> np.ndarray:
    """Expand K samples (rows of X) into the K x N_m monomial matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be K x n")
    k, n = X.shape
    cols = monomial_index_tuples(n, degree)
    M = np.ones((k, len(cols)))
    for j, idx in enumerate(cols):
        for i in idx:
            M[:, j] *= X[:, i]
    return M


def fit_least_squares(rows: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares weights for rows @ W ~= targets.

    Solved through a rank-revealing SVD; singular values below
    SVD_RCOND times the largest are treated as zero, so duplicated or
    collinear monomial columns yield the minimal-norm solution instead
    of blowing up.
    """
    rows = np.asarray(rows, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValueError("need at least one sample row")
    if rows.shape[0] != targets.shape[0]:
        raise ValueError("rows and targets disagree on sample count")
    w, *_ = np.linalg.lstsq(rows, targets, rcond=SVD_RCOND)
    return w


@dataclass(frozen=True)
class PolyModel:
    """Fitted polynomial: weights over the canonical monomials of var_names."""

    var_names: tuple[str, ...]
    degree: int
    weights: np.ndarray
    monomial_order: str = MONOMIAL_ORDER

    def __post_init__(self):
        n_m = count_monomials(len(self.var_names), self.degree)
        if len(self.weights) != n_m:
            raise ValueError(
                f"expected {n_m} weights for {len(self.var_names)} vars, degree "
                f"{self.degree}; got {len(self.weights)}"
            )
        if self.monomial_order != MONOMIAL_ORDER:
            raise ValueError(f"unsupported monomial order {self.monomial_order!r}")
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @property
    def n_vars(self) -> int:
        return len(self.var_names)


def fit_poly(X: np.ndarray, y: np.ndarray, degree: int, var_names) -> PolyModel:
    """Fit a PolyModel to samples X (K x n) with targets y."""
    M = expand_matrix(X, degree)
    w = fit_least_squares(M, y)
    return PolyModel(tuple(var_names), degree, w)


def predict(model: PolyModel, x) -> float:
    """Evaluate the polynomial at a single state vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_vars,):
        raise ValueError(f"expected {model.n_vars} inputs, got shape {x.shape}")
    return float(model.weights @ expand_monomials(x, model.degree))


def predict_many(model: PolyModel, X: np.ndarray) -> np.ndarray:
    """Evaluate the polynomial at each row of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_vars:
        raise ValueError(f"expected K x {model.n_vars} inputs")
    return expand_matrix(X, model.degree) @ model.weights


def kfold_split(n_samples: int, folds: int, seed: int, shuffle: bool = True):
    """Deterministic K-fold index splits.

    Returns a list of (train_idx, test_idx) pairs whose test sets
    partition range(n_samples) with sizes differing by at most one.
    shuffle=False keeps contiguous temporal blocks instead.
    """
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds > n_samples:
        raise ValueError(f"cannot make {folds} folds from {n_samples} samples")
    order = np.arange(n_samples)
    if shuffle:
        order = np.random.default_rng(seed).permutation(n_samples)
    splits = []
    for chunk in np.array_split(order, folds):
        test_idx = np.sort(chunk)
        mask = np.ones(n_samples, dtype=bool)
        mask[test_idx] = False
        splits.append((np.flatnonzero(mask), test_idx))
    return splits
