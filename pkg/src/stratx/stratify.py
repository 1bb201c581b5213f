"""Greedy CART regression tree used only to partition rows into strata.

The tree is never used to predict. Its leaves (disjoint sets of row indices)
are the regions inside which every feature except the one of interest is
approximately held constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class StratifyParams:
    min_samples_leaf: int = 10
    max_features: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if int(self.min_samples_leaf) != self.min_samples_leaf or self.min_samples_leaf < 2:
            raise ValueError("min_samples_leaf must be an integer >= 2")
        if not 0.0 < self.max_features <= 1.0:
            raise ValueError("max_features must be in (0, 1]")


@dataclass(eq=False)
class Node:
    """Internal node when ``feature`` is set, otherwise a leaf holding ``rows``."""
    feature: Optional[int] = None
    threshold: float = math.nan
    left: Optional["Node"] = None
    right: Optional["Node"] = None
    rows: Optional[np.ndarray] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass(frozen=True)
class StratTree:
    root: Node
    n_rows: int

    def leaves(self) -> list[np.ndarray]:
        return leaves(self)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf number (left-to-right order) reached by each row of ``X``."""
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X), dtype=np.int64)
        counter = 0
        stack = [(self.root, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            if node.is_leaf:
                out[idx] = counter
                counter += 1
                continue
            go_left = X[idx, node.feature] <= node.threshold
            stack.append((node.right, idx[~go_left]))
            stack.append((node.left, idx[go_left]))
        return out


def _best_split(x: np.ndarray, yc: np.ndarray, msl: int):
    """Best threshold on one column. Returns (sse, threshold) or None.

    Rows are ordered by (x, y) so that the cumulative sums, and therefore the
    chosen split, do not depend on the incoming row order.
    """
    m = len(x)
    order = np.lexsort((yc, x))
    xs = x[order]
    ys = yc[order]
    # left child size k ranges over msl..m-msl; split allowed only between distinct values
    k = np.arange(msl, m - msl + 1)
    ok = xs[k - 1] < xs[k]
    if not ok.any():
        return None
    k = k[ok]
    s = np.cumsum(ys)
    s2 = np.cumsum(ys * ys)
    tot, tot2 = s[-1], s2[-1]
    sl, sl2 = s[k - 1], s2[k - 1]
    sse = (sl2 - sl * sl / k) + ((tot2 - sl2) - (tot - sl) ** 2 / (m - k))
    best = int(np.argmin(sse))  # first minimum == lowest threshold
    kb = k[best]
    lo, hi = xs[kb - 1], xs[kb]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return float(sse[best]), float(thr)


def fit_stratification(X: np.ndarray, y: np.ndarray, params: StratifyParams = StratifyParams()) -> StratTree:
    """Fit the stratifying tree to ``X`` (features other than the one of
    interest) and ``y``.

    Splits minimise the summed squared error of the two children (the
    weighted child variance), considering midpoints between consecutive
    distinct column values. A node is split only if both children keep at
    least ``min_samples_leaf`` rows and the error strictly decreases. Ties are
    broken by lowest column index, then lowest threshold. There is no depth
    limit.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise DataError(f"need a non-empty 2-D feature matrix, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise DataError(f"response length {y.shape} does not match {X.shape[0]} rows")

    msl = int(params.min_samples_leaf)
    n_cols = X.shape[1]
    n_try = n_cols if params.max_features >= 1.0 else max(1, math.ceil(params.max_features * n_cols))
    rng = np.random.default_rng(params.rng_seed)
    # column-major copies make per-node column gathers cheaper
    cols = [np.ascontiguousarray(X[:, c]) for c in range(n_cols)]

    def split(idx: np.ndarray):
        m = len(idx)
        if m < 2 * msl:
            return None
        ysub = y[idx]
        if ysub.min() == ysub.max():
            return None
        mean = np.sort(ysub).sum() / m
        yc = ysub - mean
        parent_sse = float(np.sort(yc * yc).sum())
        if n_try < n_cols:
            cand = np.sort(rng.choice(n_cols, size=n_try, replace=False))
        else:
            cand = range(n_cols)
        best = None
        for c in cand:
            res = _best_split(cols[c][idx], yc, msl)
            if res is not None and (best is None or res[0] < best[0]):
                best = (res[0], res[1], int(c))
        if best is None or not best[0] < parent_sse * (1.0 - 1e-12):
            return None
        return best[2], best[1]

    # depth-first, left child first, so rng draws follow a fixed node order
    root = Node(rows=np.arange(X.shape[0]))
    stack = [root]
    while stack:
        node = stack.pop()
        found = split(node.rows)
        if found is None:
            continue
        c, thr = found
        idx = node.rows
        go_left = cols[c][idx] <= thr
        node.feature, node.threshold, node.rows = c, thr, None
        node.left, node.right = Node(rows=idx[go_left]), Node(rows=idx[~go_left])
        stack.append(node.right)
        stack.append(node.left)
    return StratTree(root, X.shape[0])


def leaves(tree: StratTree) -> list[np.ndarray]:
    """Row-index arrays of the leaves in left-to-right order; each array is
    sorted ascending. Together they partition ``range(n)``."""
    out = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            out.append(node.rows)
        else:
            stack.append(node.right)
            stack.append(node.left)
    return out
