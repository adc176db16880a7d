import numpy as np
import pytest

from blindspot.errors import (
    ConstantInput,
    RankDeficient,
    SingleClass,
    TooFew,
    Underdetermined,
)
from blindspot.stats import auc_roc, average_precision, bootstrap_ci, ols_fit, pearson


def test_auc_perfect():
    assert auc_roc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0


def test_auc_tied_pair():
    assert auc_roc([0.5, 0.5], [1, 0]) == 0.5


def test_auc_pairwise_enumeration():
    assert auc_roc([0.1, 0.9, 0.4], [0, 1, 1]) == 1.0


def test_auc_single_class():
    with pytest.raises(SingleClass):
        auc_roc([0.1, 0.2], [1, 1])


def test_auc_monotone_transform_invariance():
    rng = np.random.default_rng(6)
    s = rng.normal(size=50)
    y = (rng.random(50) < 0.4).astype(int)
    y[0], y[1] = 0, 1
    assert auc_roc(np.exp(s), y) == pytest.approx(auc_roc(s, y))


def test_auc_complement():
    rng = np.random.default_rng(7)
    s = rng.normal(size=60)
    y = (rng.random(60) < 0.5).astype(int)
    y[0], y[1] = 0, 1
    assert auc_roc(s, y) + auc_roc(s, 1 - y) == pytest.approx(1.0)


def test_ap_perfect():
    assert average_precision([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0


def test_ap_all_tied_equals_prevalence():
    assert average_precision([0.5] * 10, [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]) == pytest.approx(0.3)


def test_ap_sweep_enumeration():
    assert average_precision([0.9, 0.6, 0.3], [1, 0, 1]) == pytest.approx(0.5 + 0.5 * (2 / 3))


def test_bootstrap_constant_units():
    lo, hi = bootstrap_ci([2.0, 2.0, 2.0], [10, 10, 10], B=200, seed=1)
    assert lo == hi == pytest.approx(0.2)


def test_bootstrap_determinism():
    a = bootstrap_ci([1.0, 5.0, 2.0], [10, 10, 10], B=500, seed=9)
    b = bootstrap_ci([1.0, 5.0, 2.0], [10, 10, 10], B=500, seed=9)
    assert a == b


def test_bootstrap_two_unit_enumeration():
    lo, hi = bootstrap_ci([0.0, 4.0], [4, 4], B=10_000, seed=3)
    assert lo == 0.0
    assert hi == 1.0


def test_pearson_exact_linear():
    x = [1.0, 2.0, 3.0, 4.0]
    r, p = pearson(x, [2 * v + 1 for v in x])
    assert r == pytest.approx(1.0, abs=1e-12)
    assert p == pytest.approx(0.0, abs=1e-12)
    r, _ = pearson(x, [-v for v in x])
    assert r == pytest.approx(-1.0, abs=1e-12)


def test_pearson_hand_case():
    r, p = pearson([1, 2, 3], [1, 3, 2])
    assert r == pytest.approx(0.5)
    assert 0.0 < p < 1.0


def test_pearson_affine_invariance():
    rng = np.random.default_rng(11)
    x = rng.normal(size=30)
    y = rng.normal(size=30)
    r1, p1 = pearson(x, y)
    r2, p2 = pearson(3.0 * x + 7.0, 0.5 * y - 2.0)
    assert r1 == pytest.approx(r2, abs=1e-12)
    assert p1 == pytest.approx(p2, abs=1e-12)


def test_pearson_errors():
    with pytest.raises(TooFew):
        pearson([1, 2], [3, 4])
    with pytest.raises(ConstantInput):
        pearson([1, 1, 1], [1, 2, 3])


def test_pearson_p_matches_scipy():
    from scipy import stats as sps

    rng = np.random.default_rng(12)
    x = rng.normal(size=25)
    y = x + rng.normal(size=25)
    r, p = pearson(x, y)
    ref = sps.pearsonr(x, y)
    assert r == pytest.approx(ref.statistic, abs=1e-12)
    assert p == pytest.approx(ref.pvalue, abs=1e-10)


def test_ols_exact_line():
    rows = [{"x": float(i)} for i in range(5)]
    y = [2.0 * i for i in range(5)]
    res = ols_fit(rows, y)
    assert res.coef["x"] == pytest.approx(2.0, abs=1e-10)
    assert res.coef["intercept"] == pytest.approx(0.0, abs=1e-10)
    assert res.r_squared == pytest.approx(1.0, abs=1e-10)


def test_ols_constant_response():
    rows = [{"x": float(i)} for i in range(5)]
    res = ols_fit(rows, [3.0] * 5)
    assert res.coef["x"] == pytest.approx(0.0, abs=1e-12)
    assert res.coef["intercept"] == pytest.approx(3.0)


def test_ols_three_point_hand_case():
    res = ols_fit([{"x": 0.0}, {"x": 1.0}, {"x": 2.0}], [0.0, 1.0, 3.0])
    assert res.coef["x"] == pytest.approx(1.5, abs=1e-12)
    assert res.coef["intercept"] == pytest.approx(-1 / 6, abs=1e-12)


def test_ols_rank_deficient_duplicate_column():
    rows = [{"x": float(i), "x2": float(i)} for i in range(6)]
    with pytest.raises(RankDeficient):
        ols_fit(rows, list(range(6)))


def test_ols_underdetermined():
    with pytest.raises(Underdetermined):
        ols_fit([{"x": 1.0}, {"x": 2.0}], [1.0, 2.0])


def test_ols_dummy_coding_drops_first_level():
    rng = np.random.default_rng(13)
    rows = []
    y = []
    for i in range(30):
        fam = ["alpha", "beta", "gamma"][i % 3]
        x = float(rng.normal())
        rows.append({"x": x, "family": fam})
        y.append(2.0 * x + {"alpha": 0.0, "beta": 1.0, "gamma": -1.0}[fam] + rng.normal() * 0.01)
    res = ols_fit(rows, y)
    assert "family=alpha" not in res.coef
    assert res.coef["family=beta"] == pytest.approx(1.0, abs=0.05)
    assert res.coef["family=gamma"] == pytest.approx(-1.0, abs=0.05)
    assert all(s >= 0 for s in res.se.values())


def test_ols_matches_statsmodels_style_reference():
    # cross-check SEs/p-values against scipy's linregress on simple data
    from scipy import stats as sps

    rng = np.random.default_rng(14)
    x = rng.normal(size=40)
    y = 1.5 * x + rng.normal(size=40)
    res = ols_fit([{"x": float(v)} for v in x], y)
    ref = sps.linregress(x, y)
    assert res.coef["x"] == pytest.approx(ref.slope, abs=1e-10)
    assert res.se["x"] == pytest.approx(ref.stderr, abs=1e-10)
    assert res.p_value["x"] == pytest.approx(ref.pvalue, rel=1e-8)
