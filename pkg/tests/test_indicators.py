import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moead_uea.indicators import exact_hypervolume, gd, hypervolume, igd, ms, report
from oracles import grid_hv, inclusion_exclusion_hv, monte_carlo_hv

Z2, O2 = np.zeros(2), np.ones(2)


def test_hv_examples():
    assert hypervolume(np.empty((0, 2)), Z2, O2) == 0.0
    assert hypervolume([[0.0, 0.0]], Z2, O2) == pytest.approx(1.0)
    v = hypervolume([[0.25, 0.75], [0.75, 0.25]], Z2, O2)
    assert v == pytest.approx((0.2975 + 0.2975 - 0.1225) / 1.21, abs=1e-15)
    assert v == pytest.approx(0.390495867768595, abs=1e-12)


def test_hv_boundary_points_discarded():
    assert hypervolume([[1.1, 0.0]], Z2, O2) == 0.0
    assert hypervolume([[2.0, 2.0], [1.1, 1.1]], Z2, O2) == 0.0
    # normalization by a wide nadir
    assert hypervolume([[1.0, 2.0]], Z2, [2.0, 4.0]) == pytest.approx((0.6 * 0.6) / 1.21)


def test_gd_igd_ms_examples():
    assert gd([[0, 0.5]], [[0, 0], [1, 0]]) == pytest.approx(0.5, abs=1e-12)
    assert gd([[0, 1], [1, 0]], [[0, 1]]) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    A, R = [[0, 1], [1, 0]], [[0, 1], [1, 0], [0.707, 0.707]]
    expected = math.sqrt(0.293**2 + 0.707**2) / 3
    assert igd(A, R) == pytest.approx(expected, abs=1e-12)
    assert igd(A, R) == pytest.approx(gd(R, A), abs=1e-12)
    assert ms([[0.3, 0.4]]) == 0.0
    assert ms([[0, 1], [1, 0]]) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert ms([[0, 0], [3, 4]]) == pytest.approx(5.0, abs=1e-12)
    assert gd(R[:2], R) == 0.0 and igd(R, R) == 0.0
    with pytest.raises(ValueError):
        gd(np.empty((0, 2)), R)


def test_report_normalizes():
    rep = report([[2.0, 0.0], [0.0, 4.0]], Z2, [2.0, 4.0], reference=[[2.0, 0.0], [0.0, 4.0]])
    assert rep.gd == 0.0 and rep.igd == 0.0 and rep.ms == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("M", [2, 3, 4, 5])
def test_exact_hv_against_inclusion_exclusion(M):
    rng = np.random.default_rng(100 + M)
    for trial in range(40):
        n = int(rng.integers(1, 9))
        P = rng.random((n, M))
        if trial % 3 == 0:
            P = np.round(P * 4) / 4  # ties, duplicates and shared coordinates
        ref = np.full(M, 1.1)
        assert exact_hypervolume(P, ref) == pytest.approx(inclusion_exclusion_hv(P, ref), abs=1e-12)


@pytest.mark.parametrize("M", [2, 3, 4, 5])
def test_exact_hv_against_monte_carlo_small(M):
    # A lighter edition of the acceptance oracle (fewer sets and samples).
    rng = np.random.default_rng(M)
    for s in range(5):
        P = rng.random((int(rng.integers(1, 51)), M))
        ref = np.full(M, 1.1)
        est, se = monte_carlo_hv(P, ref, 200_000, seed=1000 * M + s)
        assert abs(exact_hypervolume(P, ref) - est) <= 3 * se


points3 = st.lists(st.tuples(*[st.floats(0, 1.2, allow_nan=False)] * 3), min_size=1, max_size=25)


@given(points3, st.tuples(*[st.floats(0, 1.2)] * 3))
def test_hv_monotone(points, extra):
    P = np.array(points)
    base = hypervolume(P, np.zeros(3), np.ones(3))
    more = hypervolume(np.vstack([P, extra]), np.zeros(3), np.ones(3))
    assert more >= base - 1e-12
    if any(np.all(p <= np.array(extra)) for p in P):  # extra is weakly dominated
        assert more == pytest.approx(base, abs=1e-12)


@given(points3, st.randoms())
def test_permutation_invariance(points, rnd):
    P = np.array(points)
    order = list(range(len(P)))
    rnd.shuffle(order)
    Q = P[order]
    z, o = np.zeros(3), np.ones(3)
    assert hypervolume(P, z, o) == pytest.approx(hypervolume(Q, z, o), abs=1e-12)
    R = np.random.default_rng(0).random((30, 3))
    assert gd(P, R) == pytest.approx(gd(Q, R)) and igd(P, R) == pytest.approx(igd(Q, R))
    assert ms(P) == ms(Q)


@given(points3)
def test_hv_in_unit_interval(points):
    v = hypervolume(np.array(points), np.zeros(3), np.ones(3))
    assert 0.0 <= v <= 1.0


def test_hv_large_sets_consistent():
    # 5-D with a few hundred points: slicing order must not matter
    rng = np.random.default_rng(9)
    P = rng.random((150, 5))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    ref = np.full(5, 1.1)
    a = exact_hypervolume(P, ref)
    b = exact_hypervolume(P[:, ::-1], ref)
    c = exact_hypervolume(P[rng.permutation(150)][:, [2, 0, 4, 1, 3]], ref)
    assert a == pytest.approx(b, rel=1e-12) and a == pytest.approx(c, rel=1e-12)


@pytest.mark.parametrize("M, n", [(2, 200), (3, 60), (4, 25), (5, 12)])
def test_exact_hv_matches_grid_decomposition(M, n):
    rng = np.random.default_rng(100 + M)
    for _ in range(5):
        P = rng.random((n, M)) * 1.2
        ref = np.full(M, 1.1)
        assert exact_hypervolume(P, ref) == pytest.approx(grid_hv(P, ref), rel=1e-12, abs=1e-14)
