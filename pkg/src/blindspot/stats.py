"""Shared statistical kernels: ROC/PR areas, document bootstrap, Pearson
correlation, and OLS with dummy-coded factors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import (
    ConstantInput,
    RankDeficient,
    SingleClass,
    TooFew,
    TooFewDocs,
    Underdetermined,
)


def _check_two_classes(labels: np.ndarray):
    if labels.min() == labels.max():
        raise SingleClass("need both classes present")


def _midranks(a: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties assigned the mean rank of their block."""
    order = np.argsort(a, kind="stable")
    ranks = np.empty(a.size, dtype=np.float64)
    sa = a[order]
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and sa[j + 1] == sa[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auc_roc(scores, labels) -> float:
    """Mann-Whitney AUC with midrank tie handling."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if s.size != y.size:
        raise ValueError("scores and labels differ in length")
    _check_two_classes(y)
    n1 = int(y.sum())
    n0 = y.size - n1
    ranks = _midranks(s)
    u = ranks[y == 1].sum() - n1 * (n1 + 1) / 2.0
    return float(u / (n1 * n0))


def average_precision(scores, labels) -> float:
    """Step-wise average precision over the score-descending sweep; tied
    scores are processed as one block."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    _check_two_classes(y)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    y = y[order]
    n_pos = int(y.sum())
    tp = 0
    fp = 0
    ap = 0.0
    prev_recall = 0.0
    i = 0
    n = y.size
    while i < n:
        j = i
        while j + 1 < n and s[j + 1] == s[i]:
            j += 1
        tp += int(y[i : j + 1].sum())
        fp += (j - i + 1) - int(y[i : j + 1].sum())
        recall = tp / n_pos
        precision = tp / (tp + fp)
        ap += (recall - prev_recall) * precision
        prev_recall = recall
        i = j + 1
    return float(ap)


def bootstrap_ci(
    unit_sums, unit_counts, B: int, seed: int, alpha: float = 0.05
) -> tuple[float, float]:
    """Percentile bootstrap over units of a pooled mean sum(s)/sum(c).

    Units are resampled with replacement B times; the interval is the
    (alpha/2, 1-alpha/2) percentile pair of the replicate pooled means.
    Deterministic given the seed.
    """
    sums = np.asarray(unit_sums, dtype=np.float64)
    counts = np.asarray(unit_counts, dtype=np.float64)
    n = sums.size
    if n < 2:
        raise TooFewDocs("need at least 2 units to bootstrap")
    if B < 100:
        raise ValueError("need B >= 100")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(B, n))
    rates = sums[idx].sum(axis=1) / counts[idx].sum(axis=1)
    lo, hi = np.percentile(rates, [100 * alpha / 2, 100 * (1 - alpha / 2)])
    return float(lo), float(hi)


def _t_sf_two_sided(t: float, df: float) -> float:
    """Two-sided p for a t statistic, via the regularized incomplete beta."""
    if not np.isfinite(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def pearson(x, y) -> tuple[float, float]:
    """Sample Pearson r with a two-sided t-test p-value (n-2 df)."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    n = xa.size
    if n != ya.size:
        raise ValueError("x and y differ in length")
    if n < 3:
        raise TooFew("need n >= 3")
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    sx = np.sqrt((xd * xd).sum())
    sy = np.sqrt((yd * yd).sum())
    if sx == 0.0 or sy == 0.0:
        raise ConstantInput("constant input has undefined correlation")
    r = float((xd * yd).sum() / (sx * sy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    return r, _t_sf_two_sided(float(t), n - 2)


@dataclass
class OlsResult:
    coef: dict[str, float]
    se: dict[str, float]
    p_value: dict[str, float]
    r_squared: float
    n: int

    @property
    def terms(self) -> list[str]:
        return list(self.coef)


def expand_design(rows: list[dict]) -> tuple[np.ndarray, list[str]]:
    """Design matrix with intercept, numeric covariates, and dummy-coded
    factors (string-valued keys; alphabetically first level dropped)."""
    if not rows:
        raise Underdetermined("empty design")
    keys = sorted(rows[0])
    numeric = [k for k in keys if not isinstance(rows[0][k], str)]
    factors = [k for k in keys if isinstance(rows[0][k], str)]
    cols = [np.ones(len(rows))]
    names = ["intercept"]
    for k in numeric:
        cols.append(np.array([float(r[k]) for r in rows]))
        names.append(k)
    for k in factors:
        levels = sorted({r[k] for r in rows})
        for level in levels[1:]:
            cols.append(np.array([1.0 if r[k] == level else 0.0 for r in rows]))
            names.append(f"{k}={level}")
    return np.column_stack(cols), names


def ols_fit(rows: list[dict], response) -> OlsResult:
    """OLS via QR with homoskedastic SEs and two-sided t p-values.

    Raises RankDeficient on collinear designs rather than pseudo-inverting.
    """
    X, names = expand_design(rows)
    y = np.asarray(response, dtype=np.float64)
    n, p = X.shape
    if y.size != n:
        raise ValueError("response length mismatch")
    if n <= p:
        raise Underdetermined(f"n={n} rows for {p} columns")
    if np.linalg.matrix_rank(X) < p:
        raise RankDeficient("design matrix is rank deficient after dummy expansion")
    Q, R = np.linalg.qr(X)
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    sigma2 = rss / (n - p)
    Rinv = np.linalg.solve(R, np.eye(p))
    se = np.sqrt(np.clip(sigma2 * (Rinv * Rinv).sum(axis=1), 0.0, None))
    pvals = []
    for b, s in zip(beta, se):
        if s == 0.0:
            pvals.append(1.0 if b == 0.0 else 0.0)
        else:
            pvals.append(_t_sf_two_sided(b / s, n - p))
    r2 = 1.0 if tss == 0.0 else 1.0 - rss / tss
    r2 = max(0.0, min(1.0, r2))
    return OlsResult(
        coef=dict(zip(names, map(float, beta))),
        se=dict(zip(names, map(float, se))),
        p_value=dict(zip(names, pvals)),
        r_squared=r2,
        n=n,
    )
