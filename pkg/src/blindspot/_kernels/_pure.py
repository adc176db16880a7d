"""Pure numpy fallback kernels.

Semantics must match ``_fast.pyx`` exactly; the kernel test suite runs
both backends on the same inputs.
"""

import numpy as np

KIND_RANK = 0
KIND_MASS = 1


def count_excluded(ranks, cum_before, kind, param):
    """Number of events outside the truncation set.

    kind=KIND_RANK: excluded iff rank > param (top-k / contrastive).
    kind=KIND_MASS: excluded iff cum_mass_before >= param (top-p).
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    cum_before = np.asarray(cum_before, dtype=np.float64)
    if kind == KIND_RANK:
        return int(np.count_nonzero(ranks > int(param)))
    if kind == KIND_MASS:
        return int(np.count_nonzero(cum_before >= param))
    raise ValueError(f"unknown kind {kind}")


def best_threshold(x, y):
    """Best binary split of x by Gini impurity of the two-class labels y.

    Returns (found, threshold, impurity) where impurity is the
    size-weighted mean Gini of the two sides. Splits send x <= threshold
    left; threshold is the midpoint of the two straddling values. When x
    is constant there is no split and found is False.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.uint8)
    n = x.shape[0]
    if n < 2:
        return False, 0.0, 0.0
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order].astype(np.float64)
    boundary = xs[1:] != xs[:-1]
    if not boundary.any():
        return False, 0.0, 0.0
    left1 = np.cumsum(ys)[:-1]
    total1 = left1[-1] + ys[-1]
    left_n = np.arange(1, n, dtype=np.float64)
    right_n = n - left_n
    right1 = total1 - left1
    p1l = left1 / left_n
    p1r = right1 / right_n
    gini = (left_n * (2.0 * p1l * (1.0 - p1l)) + right_n * (2.0 * p1r * (1.0 - p1r))) / n
    gini[~boundary] = np.inf
    i = int(np.argmin(gini))
    thr = 0.5 * (xs[i] + xs[i + 1])
    return True, float(thr), float(gini[i])
