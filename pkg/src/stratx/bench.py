"""Wall-clock scaling of the partial dependence computation with row count."""
from __future__ import annotations

import statistics
import time
import warnings
from typing import Callable, Iterable

import numpy as np

from .catpd import CatStratPDParams, catstratpd
from .data import Dataset, from_columns
from .numpd import StratPDParams, stratpd
from .synth import gen_bodyweight, gen_interaction, gen_noisy_quadratic, gen_weather

BENCH_KINDS = ("interaction", "noisy_quadratic", "bodyweight", "weather", "highcard")


def gen_high_cardinality(n: int, n_cats: int = 1000, seed: int = 0) -> Dataset:
    """Categorical ``cat`` with ``n_cats`` levels plus two uniform numeric
    columns; y = effect[cat] + x1 + x2."""
    rng = np.random.default_rng(seed)
    cat = rng.integers(0, n_cats, size=n)
    cat[:min(n, n_cats)] = np.arange(min(n, n_cats))  # every level observed
    effect = rng.normal(0.0, 10.0, size=n_cats)
    x1 = rng.uniform(0, 10, size=n)
    x2 = rng.uniform(0, 10, size=n)
    labels = np.array([f"L{i:05d}" for i in range(n_cats)])
    return from_columns({"cat": labels[cat], "x1": x1, "x2": x2}, effect[cat] + x1 + x2, categorical=["cat"])


def bench_case(kind: str, n: int, seed: int = 0) -> tuple[Dataset, str]:
    """Dataset with ``n`` rows and the feature to time for a benchmark kind."""
    if kind == "interaction":
        return gen_interaction(n, seed), "x1"
    if kind == "noisy_quadratic":
        return gen_noisy_quadratic(n, 1.0, seed), "x1"
    if kind == "bodyweight":
        return gen_bodyweight(n, seed), "height"
    if kind == "weather":
        per = -(-n // (5 * 365))
        full = gen_weather(per, seed)
        rows = np.sort(np.random.default_rng(seed).permutation(full.n)[:n])
        return full.take(rows), "state"
    if kind == "highcard":
        return gen_high_cardinality(n, seed=seed), "cat"
    raise ValueError(f"unknown bench kind {kind!r}; expected one of {BENCH_KINDS}")


def time_call(fn: Callable[[], object], repeats: int = 3) -> float:
    """Median wall-clock seconds over ``repeats`` calls."""
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run_bench(kind: str, sizes: Iterable[int], min_samples_leaf: int = 10, min_slopes_per_x: int = 5,
              seed: int = 0, repeats: int = 3) -> list[tuple[int, float]]:
    """(n, seconds) per size. Only the PD computation is timed, not data
    generation or output."""
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise ValueError("sizes must be positive")
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rows = []
    for n in sizes:
        ds, feature = bench_case(kind, n, seed)
        j = ds.column_index(feature)
        if ds.col_meta[j].is_categorical:
            params = CatStratPDParams(min_samples_leaf=min_samples_leaf, rng_seed=seed)
            fn = lambda: catstratpd(ds, j, params)  # noqa: E731
        else:
            params = StratPDParams(min_samples_leaf=min_samples_leaf, min_slopes_per_x=min_slopes_per_x,
                                   rng_seed=seed)
            fn = lambda: stratpd(ds, j, params)  # noqa: E731
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rows.append((n, time_call(fn, repeats)))
    return rows
