from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moead_uea.harness import MU_GRID
from moead_uea.weights import (
    InfeasiblePopulationSize,
    build_neighborhood,
    das_dennis,
    lattice_size,
    resolution_for_mu,
)
from oracles import compositions


def test_unit_compositions():
    W = das_dennis(3, 1).vectors
    assert {tuple(w) for w in W} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_h2_contains_halves():
    W = {tuple(w) for w in das_dennis(3, 2).vectors}
    assert len(W) == 6 and (0.5, 0.5, 0.0) in W and (0.5, 0.0, 0.5) in W


@pytest.mark.parametrize("M,H", [(3, 19), (5, 6)])
def test_default_sizes(M, H):
    assert len(das_dennis(M, H).vectors) == 210


@pytest.mark.parametrize("M", [2, 3, 4, 5])
@pytest.mark.parametrize("H", list(range(1, 31)))
def test_count_law_and_order(M, H):
    if comb(H + M - 1, M - 1) > 50_000:
        pytest.skip("lattice too large for the brute-force enumerator")
    ws = das_dennis(M, H)
    brute = compositions(M, H)
    assert len(ws.vectors) == comb(H + M - 1, M - 1) == len(brute)
    # same vectors in the same (lexicographic, descending) order
    assert np.allclose(ws.vectors, np.array(brute) / H, atol=0)
    assert np.allclose(ws.vectors.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(ws.vectors >= 0)
    assert len(np.unique(ws.vectors, axis=0)) == len(ws.vectors)


@pytest.mark.parametrize("M", sorted(MU_GRID))
def test_examined_mu_values_achievable(M):
    for mu in MU_GRID[M]:
        H = resolution_for_mu(M, mu)
        assert lattice_size(M, H) == mu == len(das_dennis(M, H).vectors)


def test_resolution_examples():
    assert resolution_for_mu(2, 200) == 199
    assert resolution_for_mu(4, 220) == 9
    with pytest.raises(InfeasiblePopulationSize, match="91 and 105") as exc:
        resolution_for_mu(3, 100)
    assert (exc.value.lower, exc.value.upper) == (91, 105)


def test_neighborhood_examples():
    ws = das_dennis(2, 4)
    assert np.allclose(ws.vectors[:2], [[1.0, 0.0], [0.75, 0.25]])
    B = build_neighborhood(ws, 2).table
    assert list(B[0]) == [0, 1]
    assert np.array_equal(build_neighborhood(ws, 1).table[:, 0], np.arange(5))
    full = build_neighborhood(ws, 5).table
    assert all(sorted(row) == list(range(5)) for row in full)


@pytest.mark.parametrize("M,mu,T", [(2, 25, 20), (3, 210, 20), (5, 210, 80), (3, 28, 28)])
def test_neighborhood_invariants(M, mu, T):
    ws = das_dennis(M, resolution_for_mu(M, mu))
    B = build_neighborhood(ws, T).table
    assert B.shape == (mu, T)
    W = ws.vectors
    for i, row in enumerate(B):
        assert row[0] == i
        assert len(set(row)) == T
        d = np.linalg.norm(W - W[i], axis=1)
        # ranked by distance, ties by smaller index
        keys = list(zip(d[row].round(12), row))
        assert keys == sorted(keys)
        assert d[row].max() <= np.sort(d)[T - 1] + 1e-12


@given(st.integers(2, 4), st.integers(1, 7), st.integers(1, 10))
def test_each_subproblem_is_its_own_first_neighbor(M, H, T):
    ws = das_dennis(M, H)
    T = min(T, len(ws))
    table = build_neighborhood(ws, T).table
    assert np.array_equal(table[:, 0], np.arange(len(ws)))
    assert all(len(set(row)) == T for row in table)


def test_deterministic():
    a = build_neighborhood(das_dennis(4, 9), 20).table
    b = build_neighborhood(das_dennis(4, 9), 20).table
    assert np.array_equal(a, b)


def test_csv_export(tmp_path):
    ws = das_dennis(3, 2)
    ws.to_csv(tmp_path / "w.csv")
    rows = (tmp_path / "w.csv").read_text().strip().splitlines()
    assert len(rows) == 7
