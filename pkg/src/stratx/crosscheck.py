"""Compare the vectorised procedures with the literal reference versions on
random small datasets."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .catpd import CatStratPDParams, catstratpd
from .data import Dataset, drop_column, from_columns
from .errors import InsufficientSupportError
from .numpd import StratPDParams, stratpd, trial_seeds
from .oracle import catstratpd_reference, stratpd_reference
from .stratify import StratifyParams, fit_stratification, leaves


@dataclass
class CheckResult:
    dataset: int
    kind: str
    n: int
    p: int
    ok: bool
    detail: str = ""


def random_dataset(rng: np.random.Generator, max_n: int = 200, max_p: int = 4) -> tuple[Dataset, int]:
    """Small dataset with ties in every column. Returns the dataset and the
    index of the feature to explain (categorical about a third of the time)."""
    n = int(rng.integers(12, max_n + 1))
    p = int(rng.integers(2, max_p + 1))
    cols = {}
    for c in range(p):
        levels = int(rng.integers(2, 40))
        cols[f"x{c}"] = rng.integers(0, levels, size=n) * float(rng.choice([0.25, 0.5, 1.0, 3.0]))
    target = int(rng.integers(p))
    categorical = []
    if rng.random() < 1 / 3:
        k = int(rng.integers(2, 9))
        cols[f"x{target}"] = rng.choice([f"c{i}" for i in range(k)], size=n)
        categorical.append(f"x{target}")
    coef = rng.normal(size=p)
    y = rng.normal(scale=0.5, size=n)
    for c, (name, v) in enumerate(cols.items()):
        num = v if name not in categorical else np.unique(v, return_inverse=True)[1] * 3.0
        y = y + coef[c] * (num if rng.random() < 0.5 else np.sin(num))
    return from_columns(cols, np.round(y, 3), categorical), target


def _check_numeric(ds: Dataset, j: int, params: StratPDParams) -> tuple[bool, str]:
    tree_seed = trial_seeds(params.rng_seed, 1)[0][1]
    tree = fit_stratification(drop_column(ds, j).features, ds.response, params.stratify_params(tree_seed))
    try:
        ref = stratpd_reference(ds.features[:, j], ds.response, leaves(tree), params.min_slopes_per_x)
    except InsufficientSupportError:
        ref = None
    try:
        fast = stratpd(ds, j, params)
    except InsufficientSupportError:
        fast = None
    if ref is None or fast is None:
        if ref is None and fast is None:
            return True, "both routes: insufficient support"
        return False, "insufficient support on one route only"
    same = (np.array_equal(fast.x, np.array(ref[0]))
            and np.array_equal(fast.pd_y, np.array(ref[1]))
            and np.array_equal(fast.counts, np.array(ref[2]))
            and fast.ignored_rows == ref[3])
    return same, "" if same else "curve mismatch"


def _check_categorical(ds: Dataset, j: int, params: CatStratPDParams) -> tuple[bool, str]:
    rng_seed, tree_seed = trial_seeds(params.rng_seed, 1)[0]
    tree = fit_stratification(drop_column(ds, j).features, ds.response,
                              StratifyParams(params.min_samples_leaf, params.max_features, tree_seed))
    n_cats = len(ds.col_meta[j].category_labels)
    ref = catstratpd_reference(ds.features[:, j], ds.response, leaves(tree), n_cats,
                               np.random.default_rng(rng_seed))
    fast = catstratpd(ds, j, params)
    same = (np.array_equal(fast.delta, np.array(ref[0]), equal_nan=True)
            and np.array_equal(fast.counts, np.array(ref[1]))
            and fast.ignored_rows == ref[2])
    return same, "" if same else "effect mismatch"


def run_crosscheck(n_datasets: int = 50, seed: int = 0, max_n: int = 200, max_p: int = 4) -> list[CheckResult]:
    """One result per random dataset; the fast and reference routes share the
    tree (same seed) and, for categoricals, the random draws."""
    rng = np.random.default_rng(seed)
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in range(n_datasets):
            out.append(_one(rng, d, max_n, max_p))
    return out


def _one(rng, d, max_n, max_p) -> CheckResult:
    ds, j = random_dataset(rng, max_n, max_p)
    msl = int(rng.integers(2, 12))
    if ds.col_meta[j].is_categorical:
        ok, detail = _check_categorical(ds, j, CatStratPDParams(min_samples_leaf=msl, rng_seed=d))
        kind = "categorical"
    else:
        params = StratPDParams(min_samples_leaf=msl, min_slopes_per_x=int(rng.integers(1, 4)), rng_seed=d)
        ok, detail = _check_numeric(ds, j, params)
        kind = "numeric"
    return CheckResult(d, kind, ds.n, ds.p, ok, detail)
