"""Effect of a categorical feature on the response, estimated from the data.

Within each stratum the mean response per category is differenced against a
randomly chosen reference category present in that stratum. The per-leaf
delta vectors are then merged into one running, count-weighted average;
a leaf can only join once it shares a category with what has been merged so
far, so several passes over the leaves may be needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._parallel import ordered_map
from .data import Dataset, drop_column
from .errors import DataError, MergeError
from .numpd import trial_seeds
from .stratify import StratifyParams, fit_stratification, leaves

MAX_PASSES = 10


@dataclass(frozen=True)
class LeafDeltas:
    delta: np.ndarray
    counts: np.ndarray
    refcat: int

    @property
    def n_rows(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class CatEffect:
    delta: np.ndarray
    counts: np.ndarray
    ignored_rows: int = 0
    centered: bool = True

    @property
    def supported(self) -> np.ndarray:
        return self.counts > 0


@dataclass(frozen=True)
class CatStratPDParams:
    min_samples_leaf: int = 10
    ntrials: int = 1
    max_features: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.ntrials < 1:
            raise ValueError("ntrials must be >= 1")
        StratifyParams(self.min_samples_leaf, self.max_features, self.rng_seed)


def leaf_deltas(cat_vals, y_vals, n_cats: int, rng: np.random.Generator) -> LeafDeltas:
    """Mean response per category minus the mean of a reference category
    drawn uniformly from the categories present. Absent categories are NaN."""
    cats = np.asarray(cat_vals).astype(np.int64)
    y = np.asarray(y_vals, dtype=np.float64)
    if len(cats) == 0 or cats.shape != y.shape:
        raise ValueError("cat_vals and y_vals must be non-empty vectors of equal length")
    if cats.min() < 0 or cats.max() >= n_cats:
        raise ValueError(f"category codes must lie in [0, {n_cats})")
    counts = np.bincount(cats, minlength=n_cats)
    sums = np.bincount(cats, weights=y, minlength=n_cats)
    present = np.flatnonzero(counts)
    refcat = int(present[rng.integers(len(present))])
    with np.errstate(invalid="ignore", divide="ignore"):
        ybar = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return LeafDeltas(ybar - ybar[refcat], counts, refcat)


def center(delta: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Shift finite entries so their count-weighted mean is zero."""
    ok = counts > 0
    if not ok.any():
        return delta.copy()
    w = counts[ok].astype(np.float64)
    # fsum is correctly rounded, so the shift does not depend on summation order
    shift = math.fsum(w * delta[ok]) / math.fsum(w)
    return np.where(ok, delta - shift, np.nan)


def merge_deltas(leaf_list: Sequence[LeafDeltas], n_cats: int, rng: np.random.Generator) -> CatEffect:
    """Merge leaf delta vectors into one centered effect vector.

    The first leaf seeds the running average. Each pass visits the remaining
    leaves in order; a leaf sharing at least one supported category with the
    running vector is re-based on a random shared category and folded in with
    count weights (an entry missing on one side takes the other side's value).
    Passes stop once one merges nothing; rows of leaves never merged are
    reported as ignored.
    """
    if not leaf_list:
        raise ValueError("need at least one leaf")
    first = leaf_list[0]
    dy = first.delta.astype(np.float64).copy()
    c = first.counts.astype(np.int64).copy()
    work = list(leaf_list[1:])
    passes = 0
    while work:
        if passes == MAX_PASSES:
            raise MergeError(f"{len(work)} leaves still mergeable after {MAX_PASSES} passes")
        passes += 1
        remaining = []
        for leaf in work:
            common = np.flatnonzero((c > 0) & (leaf.counts > 0))
            if len(common) == 0:
                remaining.append(leaf)
                continue
            cat = int(common[rng.integers(len(common))])
            dl = leaf.delta - leaf.delta[cat] + dy[cat]
            cl = leaf.counts
            have_run = c > 0
            have_leaf = cl > 0
            both = have_run & have_leaf
            with np.errstate(invalid="ignore"):
                avg = (c * dy + cl * dl) / (c + cl)
            dy = np.where(both, avg, np.where(have_run, dy, dl))
            c = c + cl
        if len(remaining) == len(work):
            break
        work = remaining
    ignored = sum(leaf.n_rows for leaf in work)
    return CatEffect(center(dy, c), c, ignored, True)


def effect_from_leaves(cats: np.ndarray, y: np.ndarray, leaf_rows: Sequence[np.ndarray],
                       n_cats: int, rng: np.random.Generator) -> CatEffect:
    """Leaf deltas (one refcat draw per leaf, in leaf order) then merging,
    for an already computed stratification."""
    per_leaf = [leaf_deltas(cats[rows], y[rows], n_cats, rng) for rows in leaf_rows]
    return merge_deltas(per_leaf, n_cats, rng)


def average_effects(effects: Sequence[CatEffect]) -> CatEffect:
    """Entry-wise mean of centered trial vectors, skipping NaN entries;
    counts and ignored rows add up."""
    if len(effects) == 1:
        return effects[0]
    stack = np.vstack([e.delta for e in effects])
    finite = np.isfinite(stack)
    n_ok = finite.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(n_ok > 0, np.where(finite, stack, 0.0).sum(axis=0) / np.maximum(n_ok, 1), np.nan)
    counts = np.sum([e.counts for e in effects], axis=0)
    return CatEffect(mean, counts, sum(e.ignored_rows for e in effects), True)


def _single_effect(ds: Dataset, j: int, n_cats: int, params: CatStratPDParams, tree_seed: int,
                   rng: np.random.Generator) -> CatEffect:
    tree = fit_stratification(drop_column(ds, j).features, ds.response,
                              StratifyParams(params.min_samples_leaf, params.max_features, tree_seed))
    return effect_from_leaves(ds.features[:, j], ds.response, leaves(tree), n_cats, rng)


def catstratpd(ds: Dataset, j: int, params: CatStratPDParams = CatStratPDParams()) -> CatEffect:
    """Per-category effect of categorical feature ``j`` on the response,
    centered to a count-weighted zero mean. Only differences between entries
    are meaningful."""
    if not 0 <= j < ds.p:
        raise DataError(f"column index {j} out of range for {ds.p} feature columns")
    meta = ds.col_meta[j]
    if not meta.is_categorical:
        raise DataError(f"column {meta.name!r} is numeric; use stratpd")
    if ds.p < 2:
        raise DataError("need at least one feature besides the feature of interest")
    n_cats = len(meta.category_labels)

    def run(seed_pair):
        boot_seed, tree_seed = seed_pair
        rng = np.random.default_rng(boot_seed)
        data = ds if params.ntrials == 1 else ds.take(rng.integers(0, ds.n, size=ds.n))
        return _single_effect(data, j, n_cats, params, tree_seed, rng)

    return average_effects(ordered_map(run, trial_seeds(params.rng_seed, params.ntrials)))
