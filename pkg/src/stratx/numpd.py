"""Partial dependence of a numeric feature, estimated straight from the data.

Rows are stratified by a tree fit to every other feature. Inside each leaf,
the mean response at each distinct value of the feature gives forward
difference slopes between neighbouring values. Slopes from all leaves that
span an x value are averaged, poorly supported x values are dropped, and
the surviving slopes are integrated from the leftmost value.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._parallel import ordered_map
from .data import Dataset, drop_column
from .errors import DataError, InsufficientSupportError
from .stratify import StratifyParams, fit_stratification, leaves


class StratxWarning(UserWarning):
    pass


class SlopeSegment(NamedTuple):
    x_lo: float
    x_hi: float
    slope: float


@dataclass(frozen=True)
class PDCurve:
    x: np.ndarray
    pd_y: np.ndarray
    counts: np.ndarray
    ignored_rows: int = 0

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class StratPDParams:
    min_samples_leaf: int = 10
    min_slopes_per_x: int = 5
    ntrials: int = 1
    max_features: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.min_slopes_per_x < 1:
            raise ValueError("min_slopes_per_x must be >= 1")
        if self.ntrials < 1:
            raise ValueError("ntrials must be >= 1")
        # validates min_samples_leaf and max_features
        self.stratify_params(self.rng_seed)

    def stratify_params(self, seed: int) -> StratifyParams:
        return StratifyParams(self.min_samples_leaf, self.max_features, seed)


def _leaf_slope_arrays(xj: np.ndarray, y: np.ndarray):
    ux, inv = np.unique(xj, return_inverse=True)
    if len(ux) < 2:
        return None
    ybar = np.bincount(inv, weights=y) / np.bincount(inv)
    slopes = np.diff(ybar) / np.diff(ux)
    return ux[:-1], ux[1:], slopes


def leaf_slopes(xj_vals, y_vals) -> list[SlopeSegment]:
    """Forward-difference slopes between the mean responses at consecutive
    distinct ``xj_vals``. Empty when there is only one distinct value."""
    xj = np.asarray(xj_vals, dtype=np.float64)
    y = np.asarray(y_vals, dtype=np.float64)
    if xj.shape != y.shape or xj.ndim != 1 or len(xj) == 0:
        raise ValueError("xj_vals and y_vals must be non-empty vectors of equal length")
    res = _leaf_slope_arrays(xj, y)
    if res is None:
        return []
    return [SlopeSegment(float(a), float(b), float(s)) for a, b, s in zip(*res)]


def _aggregate(lo: np.ndarray, hi: np.ndarray, slopes: np.ndarray, ux: np.ndarray):
    ia = np.searchsorted(ux, lo, side="left")
    ib = np.searchsorted(ux, hi, side="left")
    # a <= x < b covers ux[ia:ib]; endpoints not on the grid are handled by searchsorted
    counts = np.zeros(len(ux) + 1, dtype=np.int64)
    np.add.at(counts, ia, 1)
    np.add.at(counts, ib, -1)
    counts = np.cumsum(counts[:-1])
    # slopes accumulate strictly in segment order so sums are reproducible
    sums = np.zeros(len(ux))
    for a, b, s in zip(ia.tolist(), ib.tolist(), slopes.tolist()):
        sums[a:b] += s
    with np.errstate(invalid="ignore", divide="ignore"):
        delta = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return counts, delta


def aggregate_slopes(segments: Sequence[SlopeSegment], ux) -> tuple[np.ndarray, np.ndarray]:
    """Count and average the slopes whose half-open range ``[x_lo, x_hi)``
    contains each value of ``ux``. The average is NaN where the count is 0."""
    ux = np.asarray(ux, dtype=np.float64)
    if len(ux) > 1 and not np.all(np.diff(ux) > 0):
        raise ValueError("ux must be strictly increasing")
    if not segments:
        return np.zeros(len(ux), dtype=np.int64), np.full(len(ux), np.nan)
    seg = np.asarray(segments, dtype=np.float64).reshape(-1, 3)
    return _aggregate(seg[:, 0], seg[:, 1], seg[:, 2], ux)


def filter_and_integrate(ux, delta, counts, min_slopes_per_x: int, ignored_rows: int = 0) -> PDCurve:
    """Keep x values backed by at least ``min_slopes_per_x`` slopes and
    integrate: each kept slope multiplies the gap to the next kept x.

    Raises :class:`InsufficientSupportError` when fewer than two x values
    survive.
    """
    ux = np.asarray(ux, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.int64)
    keep = counts >= min_slopes_per_x
    x = ux[keep]
    if len(x) < 2:
        raise InsufficientSupportError(
            f"insufficient supported x values: {len(x)} x value(s) have >= {min_slopes_per_x} slopes")
    d = delta[keep]
    pd_y = np.concatenate(([0.0], np.cumsum(d[:-1] * np.diff(x))))
    return PDCurve(x, pd_y, counts[keep], int(ignored_rows))


def curve_from_leaves(xj: np.ndarray, y: np.ndarray, leaf_rows: Sequence[np.ndarray],
                      min_slopes_per_x: int) -> PDCurve:
    """Slopes per leaf, aggregation over the distinct values of ``xj`` and
    integration, for an already computed stratification."""
    ux = np.unique(xj)
    los, his, ss = [], [], []
    ignored = 0
    for rows in leaf_rows:
        res = _leaf_slope_arrays(xj[rows], y[rows])
        if res is None:
            ignored += len(rows)
            continue
        los.append(res[0])
        his.append(res[1])
        ss.append(res[2])
    if ss:
        counts, delta = _aggregate(np.concatenate(los), np.concatenate(his), np.concatenate(ss), ux)
    else:
        counts, delta = np.zeros(len(ux), dtype=np.int64), np.full(len(ux), np.nan)
    return filter_and_integrate(ux, delta, counts, min_slopes_per_x, ignored)


def _single_curve(ds: Dataset, j: int, params: StratPDParams, tree_seed: int) -> PDCurve:
    xj = ds.features[:, j]
    tree = fit_stratification(drop_column(ds, j).features, ds.response, params.stratify_params(tree_seed))
    curve = curve_from_leaves(xj, ds.response, leaves(tree), params.min_slopes_per_x)
    if curve.ignored_rows > 0.5 * ds.n:
        warnings.warn(f"{curve.ignored_rows} of {ds.n} rows sit in leaves with a single "
                      f"{ds.col_meta[j].name} value and were ignored", StratxWarning, stacklevel=3)
    return curve


def average_curves(curves: Sequence[PDCurve]) -> PDCurve:
    """Average curves on the union of their x values.

    Each curve is linearly interpolated onto union points inside its own x
    range; points outside it are skipped for that curve. Counts add up over
    the curves that kept the exact point. Ignored rows are summed.
    """
    if len(curves) == 1:
        return curves[0]
    grid = np.unique(np.concatenate([c.x for c in curves]))
    total = np.zeros(len(grid))
    cover = np.zeros(len(grid), dtype=np.int64)
    counts = np.zeros(len(grid), dtype=np.int64)
    for c in curves:
        inside = (grid >= c.x[0]) & (grid <= c.x[-1])
        total[inside] += np.interp(grid[inside], c.x, c.pd_y)
        cover += inside
        counts[np.searchsorted(grid, c.x)] += c.counts
    return PDCurve(grid, total / cover, counts, sum(c.ignored_rows for c in curves))


def trial_seeds(seed: int, ntrials: int) -> list[tuple[int, int]]:
    """(bootstrap seed, tree seed) per trial, derived from one root seed."""
    out = []
    for child in np.random.SeedSequence(seed).spawn(ntrials):
        boot, tree = child.generate_state(2, dtype=np.uint64)
        out.append((int(boot), int(tree)))
    return out


def stratpd(ds: Dataset, j: int, params: StratPDParams = StratPDParams()) -> PDCurve:
    """Partial dependence curve of the response on numeric feature ``j``.

    With ``ntrials > 1`` each trial runs on a bootstrap resample of the rows
    and the trial curves are combined with :func:`average_curves`. Trials
    with too little support are skipped; the error is raised only if every
    trial fails.
    """
    if not 0 <= j < ds.p:
        raise DataError(f"column index {j} out of range for {ds.p} feature columns")
    if ds.col_meta[j].is_categorical:
        raise DataError(f"column {ds.col_meta[j].name!r} is categorical; use catstratpd")
    if ds.p < 2:
        raise DataError("need at least one feature besides the feature of interest")
    if ds.n < 2 * params.min_samples_leaf:
        warnings.warn(f"n={ds.n} < 2*min_samples_leaf={2 * params.min_samples_leaf}: "
                      "the tree is a single leaf and the curve is marginal", StratxWarning, stacklevel=2)
    seeds = trial_seeds(params.rng_seed, params.ntrials)
    if params.ntrials == 1:
        return _single_curve(ds, j, params, seeds[0][1])

    def run(seed_pair):
        boot_seed, tree_seed = seed_pair
        rows = np.random.default_rng(boot_seed).integers(0, ds.n, size=ds.n)
        try:
            return _single_curve(ds.take(rows), j, params, tree_seed)
        except InsufficientSupportError as e:
            return e

    results = ordered_map(run, seeds)
    curves = [r for r in results if isinstance(r, PDCurve)]
    if not curves:
        raise results[0]
    return average_curves(curves)
