import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stratx.catpd import (CatStratPDParams, LeafDeltas, MAX_PASSES, catstratpd, center, leaf_deltas,
                          merge_deltas)
from stratx.data import from_columns
from stratx.errors import DataError, MergeError
from stratx.oracle import catstratpd_reference
from stratx.stratify import StratifyParams, fit_stratification, leaves


class FixedDraws:
    """Stands in for a Generator: returns scripted indices."""

    def __init__(self, *picks):
        self.picks = list(picks)

    def integers(self, k):
        pick = self.picks.pop(0)
        assert 0 <= pick < k
        return pick


def leaf(delta, counts, refcat=0):
    return LeafDeltas(np.array(delta, dtype=float), np.array(counts), refcat)


def test_leaf_deltas_hand_example():
    ld = leaf_deltas([0, 0, 1], [2, 4, 10], 2, FixedDraws(0))
    assert ld.refcat == 0
    np.testing.assert_array_equal(ld.delta, [0, 7])
    np.testing.assert_array_equal(ld.counts, [2, 1])


def test_leaf_deltas_single_category():
    ld = leaf_deltas([2, 2], [5, 7], 4, np.random.default_rng(0))
    assert ld.refcat == 2
    np.testing.assert_array_equal(ld.delta, [np.nan, np.nan, 0, np.nan])
    np.testing.assert_array_equal(ld.counts, [0, 0, 2, 0])


@pytest.mark.parametrize("pick", [0, 1])
def test_leaf_deltas_equal_means(pick):
    ld = leaf_deltas([0, 1], [3.5, 3.5], 2, FixedDraws(pick))
    np.testing.assert_array_equal(ld.delta, [0, 0])


def test_merge_same_refcat():
    eff = merge_deltas([leaf([0, 10], [1, 1]), leaf([0, 20], [1, 1])], 2, FixedDraws(0))
    # running (0,10) and leaf (0,20) average to (0,15); centering subtracts 7.5
    np.testing.assert_array_equal(eff.delta, [-7.5, 7.5])
    assert eff.centered and eff.ignored_rows == 0


def test_merge_rebases_on_common_category():
    # leaf B is relative to category 1; re-basing on category 1 maps it onto A's scale
    a = leaf([0, 5, np.nan], [2, 2, 0])
    b = leaf([np.nan, 0, 3], [0, 2, 2], refcat=1)
    eff = merge_deltas([a, b], 3, FixedDraws(0))
    raw = np.array([0, 5, 8.0])
    np.testing.assert_allclose(eff.delta, raw - np.average(raw, weights=[2, 4, 2]))
    np.testing.assert_array_equal(eff.counts, [2, 4, 2])


def test_merge_one_leaf_is_centered():
    eff = merge_deltas([leaf([0, 4, np.nan], [3, 1, 0])], 3, np.random.default_rng(0))
    np.testing.assert_allclose(eff.delta[:2], [-1, 3])
    assert np.isnan(eff.delta[2])


def test_disjoint_leaves_are_ignored():
    eff = merge_deltas([leaf([0, np.nan], [3, 0]), leaf([np.nan, 0], [0, 4], refcat=1)], 2,
                       np.random.default_rng(0))
    assert eff.ignored_rows == 4
    assert np.isnan(eff.delta[1]) and eff.counts[1] == 0


def test_second_pass_merges_late_leaf():
    # leaf 1 only connects through leaf 2, which comes later in order
    l0 = leaf([0, 1, np.nan, np.nan], [1, 1, 0, 0])
    l1 = leaf([np.nan, np.nan, 0, 2], [0, 0, 1, 1], refcat=2)
    l2 = leaf([np.nan, 0, 4, np.nan], [0, 1, 1, 0], refcat=1)
    eff = merge_deltas([l0, l1, l2], 4, FixedDraws(0, 0))
    assert eff.ignored_rows == 0
    # chain: cat1 = 1, cat2 = 1 + 4 = 5, cat3 = 5 + 2 = 7
    raw = np.array([0, 1, 5, 7.0])
    w = np.array([1, 2, 2, 1.0])
    np.testing.assert_allclose(eff.delta, raw - np.average(raw, weights=w))


def test_pass_limit():
    # a chain visited in reverse order merges exactly one leaf per pass
    k = MAX_PASSES + 3
    chain = [leaf(np.where(np.isin(np.arange(k), [i, i + 1]), 0.0, np.nan),
                  np.isin(np.arange(k), [i, i + 1]).astype(int), refcat=i) for i in range(k - 1)]
    with pytest.raises(MergeError):
        merge_deltas([chain[0], *chain[:0:-1]], k, np.random.default_rng(0))
    short = [leaf(np.where(np.isin(np.arange(6), [i, i + 1]), 0.0, np.nan),
                  np.isin(np.arange(6), [i, i + 1]).astype(int), refcat=i) for i in range(5)]
    eff = merge_deltas([short[0], *short[:0:-1]], 6, np.random.default_rng(0))
    assert eff.ignored_rows == 0


def test_center_weighted_zero_mean():
    d = center(np.array([1.0, 2.0, np.nan, 10.0]), np.array([3, 1, 0, 2]))
    ok = ~np.isnan(d)
    assert abs(np.average(d[ok], weights=[3, 1, 2])) < 1e-12


def test_numeric_feature_rejected():
    ds = from_columns({"c": ["a", "b", "a"], "x": [1, 2, 3]}, [1, 2, 3], categorical=["c"])
    with pytest.raises(DataError, match="numeric"):
        catstratpd(ds, 1)


def test_constant_response():
    rng = np.random.default_rng(0)
    ds = from_columns({"c": rng.integers(0, 5, 300), "x": rng.normal(size=300)}, np.full(300, 7.0),
                      categorical=["c"])
    eff = catstratpd(ds, 0)
    assert np.all(eff.delta[np.isfinite(eff.delta)] == 0)


def test_single_category_column():
    ds = from_columns({"c": ["a"] * 30, "x": np.arange(30.0)}, np.arange(30.0), categorical=["c"])
    eff = catstratpd(ds, 0)
    np.testing.assert_array_equal(eff.delta, [0.0])
    np.testing.assert_array_equal(eff.counts, [30])


def noiseless_additive(n=600, seed=1):
    rng = np.random.default_rng(seed)
    cat = rng.integers(0, 4, n)
    xo = rng.integers(0, 6, n).astype(float)
    base = np.array([3.0, -1.0, 7.0, 0.5])
    return from_columns({"c": cat, "xo": xo}, base[cat] + xo ** 2, categorical=["c"]), base


def test_refcat_invariance():
    ds, base = noiseless_additive()
    results = [catstratpd(ds, 0, CatStratPDParams(min_samples_leaf=2, rng_seed=s)) for s in range(6)]
    for eff in results[1:]:
        np.testing.assert_allclose(eff.delta, results[0].delta, atol=1e-9)
    np.testing.assert_allclose(results[0].delta - results[0].delta[0], base - base[0], atol=1e-9)


def test_rows_accounted_for():
    rng = np.random.default_rng(4)
    n = 400
    cat = rng.integers(0, 30, n)
    x = rng.uniform(size=n)
    ds = from_columns({"c": cat, "x": x}, cat * 0.1 + x, categorical=["c"])
    eff = catstratpd(ds, 0, CatStratPDParams(min_samples_leaf=3))
    assert eff.ignored_rows + eff.counts.sum() == n
    assert np.array_equal(np.isnan(eff.delta), eff.counts == 0)


def test_ntrials_average():
    ds, base = noiseless_additive()
    eff = catstratpd(ds, 0, CatStratPDParams(min_samples_leaf=2, ntrials=3, rng_seed=2))
    d = eff.delta - eff.delta[0]
    np.testing.assert_allclose(d, base - base[0], atol=1e-9)
    assert eff.counts.sum() == 3 * ds.n - eff.ignored_rows


cat_data = st.tuples(st.integers(5, 200), st.integers(1, 3), st.integers(2, 8), st.integers(2, 10),
                     st.integers(0, 2**31))


@given(cat_data)
@settings(max_examples=40, deadline=None)
def test_matches_reference_exactly(args):
    n, p_other, k, msl, seed = args
    rng = np.random.default_rng(seed)
    cats = rng.integers(0, k, n)
    k = int(cats.max()) + 1
    X = rng.integers(0, 10, size=(n, p_other)).astype(float)
    y = cats * 1.7 + np.cos(X).sum(axis=1) + rng.normal(size=n)
    lv = leaves(fit_stratification(X, y, StratifyParams(msl)))
    ref_delta, ref_counts, ref_ignored = catstratpd_reference(cats, y, lv, k, np.random.default_rng(seed))
    rng_fast = np.random.default_rng(seed)
    per_leaf = [leaf_deltas(cats[r], y[r], k, rng_fast) for r in lv]
    eff = merge_deltas(per_leaf, k, rng_fast)
    assert np.array_equal(eff.delta, np.array(ref_delta), equal_nan=True)
    assert eff.counts.tolist() == ref_counts
    assert eff.ignored_rows == ref_ignored
