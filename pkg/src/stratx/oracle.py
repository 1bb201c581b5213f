"""Slow, literal reference versions of the numeric and categorical
procedures, written with plain Python lists and loops.

They take an existing leaf partition (so both routes share one tree) and,
for categoricals, a random generator that must be seeded like the one given
to the fast route: reference categories are drawn leaf by leaf, then one
draw per merge, each as ``rng.integers(len(choices))`` over sorted choices.
Means are accumulated left to right in row order, matching the fast route.
"""
from __future__ import annotations

import math

from .errors import InsufficientSupportError


def stratpd_reference(xj, y, leaf_rows, min_slopes_per_x):
    """Returns ``(x, pd_y, counts, ignored_rows)`` as lists."""
    xj = [float(v) for v in xj]
    y = [float(v) for v in y]
    D = []
    ignored = 0
    for L in leaf_rows:
        L = [int(i) for i in L]
        x_L = sorted(set(xj[i] for i in L))
        if len(x_L) < 2:
            ignored += len(L)
            continue
        ybar_L = []
        for u in x_L:
            total, count = 0.0, 0
            for i in L:
                if xj[i] == u:
                    total += y[i]
                    count += 1
            ybar_L.append(total / count)
        for k in range(len(x_L) - 1):
            slope = (ybar_L[k + 1] - ybar_L[k]) / (x_L[k + 1] - x_L[k])
            D.append((x_L[k], x_L[k + 1], slope))

    ux = sorted(set(xj))
    c = []
    delta = []
    for x in ux:
        slopes_x = [slope for (a, b, slope) in D if x >= a and x < b]
        c.append(len(slopes_x))
        if slopes_x:
            total = 0.0
            for s in slopes_x:
                total += s
            delta.append(total / len(slopes_x))
        else:
            delta.append(math.nan)

    delta = [d for d, cx in zip(delta, c) if cx >= min_slopes_per_x]
    kept_counts = [cx for cx in c if cx >= min_slopes_per_x]
    ux = [x for x, cx in zip(ux, c) if cx >= min_slopes_per_x]
    if len(ux) < 2:
        raise InsufficientSupportError("insufficient supported x values")
    pd_x = [ux[k + 1] - ux[k] for k in range(len(ux) - 1)]
    pd_y = [0.0]
    running = 0.0
    for k in range(len(pd_x)):
        running += delta[k] * pd_x[k]
        pd_y.append(running)
    return ux, pd_y, kept_counts, ignored


def catstratpd_reference(cats, y, leaf_rows, n_cats, rng, max_passes=10):
    """Returns ``(delta, counts, ignored_rows)`` as lists, delta centered to
    a count-weighted zero mean."""
    cats = [int(v) for v in cats]
    y = [float(v) for v in y]
    nan = math.nan

    DY = []  # per leaf category deltas
    C = []   # per leaf category counts
    for L in leaf_rows:
        x_L = sorted(set(cats[i] for i in L))
        ybar = [nan] * n_cats
        counts = [0] * n_cats
        for k in x_L:
            total = 0.0
            for i in L:
                if cats[i] == k:
                    total += y[i]
                    counts[k] += 1
            ybar[k] = total / counts[k]
        refcat = x_L[int(rng.integers(len(x_L)))]
        DY.append([v - ybar[refcat] for v in ybar])
        C.append(counts)

    dy, c = list(DY[0]), list(C[0])
    completed = [0]
    work = list(range(1, len(DY)))
    passes = 0
    while len(work) > 0 and len(completed) > 0:
        if passes == max_passes:
            raise RuntimeError("merge did not finish")
        passes += 1
        completed = []
        for L in work:
            common = [k for k in range(n_cats) if c[k] > 0 and C[L][k] > 0]
            if common:
                completed.append(L)
                cat = common[int(rng.integers(len(common)))]
                shifted = [v - DY[L][cat] + dy[cat] for v in DY[L]]
                for k in range(n_cats):
                    if c[k] > 0 and C[L][k] > 0:
                        dy[k] = (c[k] * dy[k] + C[L][k] * shifted[k]) / (c[k] + C[L][k])
                    elif C[L][k] > 0:
                        dy[k] = shifted[k]
                    c[k] += C[L][k]
        work = [L for L in work if L not in completed]

    ignored = sum(sum(C[L]) for L in work)
    wsum = math.fsum(float(c[k]) * dy[k] for k in range(n_cats) if c[k] > 0)
    wtot = math.fsum(float(c[k]) for k in range(n_cats) if c[k] > 0)
    shift = wsum / wtot
    centered = [dy[k] - shift if c[k] > 0 else nan for k in range(n_cats)]
    return centered, c, ignored
