import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moead_uea.stats import aps, performance_scores, significance_matrix, stats_report, wilcoxon_rank_sum
from oracles import exact_rank_sum_p


def test_examples():
    assert wilcoxon_rank_sum([1, 2, 3], [4, 5, 6]) == pytest.approx(0.05, abs=1e-15)
    x = np.arange(31.0)
    assert wilcoxon_rank_sum(x, x) >= 0.5
    assert wilcoxon_rank_sum(x, x + 100) < 1e-9
    assert wilcoxon_rank_sum([2.0, 2.0, 2.0], [2.0, 2.0]) == 1.0


def test_extreme_separation_exact_tail_at_n10():
    x, y = np.arange(10.0), np.arange(10.0) + 50
    # only one of C(20, 10) splits puts every top rank in y
    assert wilcoxon_rank_sum(x, y, "exact") == pytest.approx(1 / 184756, rel=1e-12)
    assert wilcoxon_rank_sum(x, y, "normal") < 1e-3


@pytest.mark.parametrize("seed", range(30))
def test_exact_against_enumeration(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 7, size=2)
    x = np.round(rng.normal(size=n), 1)
    y = np.round(rng.normal(0.5, size=m), 1)
    if np.all(np.concatenate([x, y]) == x[0]):
        pytest.skip("degenerate sample")
    assert wilcoxon_rank_sum(x, y, "exact") == pytest.approx(exact_rank_sum_p(x, y), abs=1e-12)


def test_normal_against_scipy():
    from scipy.stats import mannwhitneyu

    rng = np.random.default_rng(1)
    for _ in range(100):
        x = np.round(rng.normal(size=15), 1)
        y = np.round(rng.normal(0.3, size=12), 1)
        ref = mannwhitneyu(y, x, alternative="greater", method="asymptotic", use_continuity=True).pvalue
        assert wilcoxon_rank_sum(x, y) == pytest.approx(ref, abs=1e-12)


def test_exact_normal_agreement_n10():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        x, y = rng.normal(size=10), rng.normal(rng.uniform(0, 1.5), size=10)
        worst = max(worst, abs(wilcoxon_rank_sum(x, y, "exact") - wilcoxon_rank_sum(x, y, "normal")))
    assert worst <= 0.01


samples = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=14)


@given(samples, samples)
def test_monotone_transform_invariance(x, y):
    x, y = np.array(x), np.array(y)
    p = wilcoxon_rank_sum(x, y)
    # piecewise power-of-two scaling: nonlinear, strictly increasing and exact in floating point
    t = lambda v: np.where(v > 0, v * 8.0, v * 2.0)  # noqa: E731
    assert wilcoxon_rank_sum(t(x), t(y)) == pytest.approx(p, abs=1e-9)


@given(samples, samples)
def test_opposite_directions_not_both_significant(x, y):
    assert not (wilcoxon_rank_sum(x, y) < 0.05 and wilcoxon_rank_sum(y, x) < 0.05)


def test_scores_examples():
    same = [np.arange(31.0)] * 3
    assert performance_scores(same).tolist() == [0, 0, 0]
    a3 = np.arange(31.0)
    assert performance_scores([a3 + 200, a3 + 100, a3]).tolist() == [0, 1, 2]
    # overlapping samples, p about 0.2 both ways -> no significance
    x = np.array([1.0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12])
    y = x + 1.5
    p = wilcoxon_rank_sum(x, y)
    assert 0.05 < p < 0.5
    assert performance_scores([x, y]).tolist() == [0, 0]


def test_aps_examples():
    assert aps([[0, 1, 2]]).tolist() == [0, 1, 2]
    assert aps([[0, 2], [2, 0]]).tolist() == [1, 1]
    rng = np.random.default_rng(3)
    inst = [[rng.normal(i * 0.3, size=11) for i in range(4)] for _ in range(5)]
    rep = stats_report(inst)
    assert rep.P.shape == (5, 4)
    assert np.all(rep.aps >= 0) and np.all(rep.aps <= 3)
    for d in rep.delta:
        assert np.all(np.diag(d) == 0) and not np.any(d & d.T)


def test_significance_single_config():
    assert significance_matrix([np.arange(5.0)]).shape == (1, 1)


def test_rejects_bad_samples():
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([], [1.0])
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([np.nan, 1.0], [1.0, 2.0])
