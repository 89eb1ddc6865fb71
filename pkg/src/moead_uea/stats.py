"""Wilcoxon rank-sum tests and average performance scores.

Scores count, for each configuration, how many rivals beat it
significantly on one problem instance (larger indicator values are
better); APS averages those counts over instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, rankdata

ALPHA = 0.05
NORMAL_MIN_N = 10  # per side; smaller samples are enumerated exactly


def _sample(v, name):
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite values")
    return v


def wilcoxon_rank_sum(x, y, method: str = "auto") -> float:
    """One-sided rank-sum p-value for the alternative that ``y`` tends to exceed ``x``.

    Ties get midranks. With ``method="auto"`` the normal approximation
    (tie-corrected variance, continuity correction 0.5) is used when both
    samples have at least 10 values and the exact permutation
    distribution of the rank sum otherwise. When every pooled value is
    equal there is no evidence either way and 1.0 is returned.

    Args:
        x: Sample expected to be smaller under the alternative.
        y: Sample expected to be larger under the alternative.
        method: ``"auto"``, ``"exact"`` or ``"normal"``.
    """
    x = _sample(x, "x")
    y = _sample(y, "y")
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    n, m = len(x), len(y)
    ranks = rankdata(np.concatenate([x, y]))
    if np.all(ranks == ranks[0]):
        return 1.0
    ry = ranks[n:]
    if method == "auto":
        method = "normal" if min(n, m) >= NORMAL_MIN_N else "exact"
    if method == "exact":
        return _exact_upper_tail(ranks, m, float(ry.sum()))
    N = n + m
    w = float(ry.sum())
    mean = m * (N + 1) / 2.0
    _, counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(counts**3 - counts)) / (N * (N - 1))
    var = n * m / 12.0 * ((N + 1) - tie_term)
    if var <= 0.0:
        return 1.0
    zscore = (w - mean - 0.5) / math.sqrt(var)
    return float(norm.sf(zscore))


def _exact_upper_tail(ranks, m, observed):
    """P(sum of m ranks drawn without replacement >= observed) under the null.

    Works on doubled ranks (always integers with midranks) with a
    subset-sum count over (items chosen, sum).
    """
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    # ways[j, s]: subsets of size j with doubled-sum s
    ways = np.zeros((m + 1, total + 1))
    ways[0, 0] = 1.0
    for r in doubled:
        ways[1:, r:] += ways[:-1, : total + 1 - r].copy()
    target = int(round(2.0 * observed))
    dist = ways[m]
    return float(dist[target:].sum() / dist.sum())


@dataclass
class StatsReport:
    """Significance matrices, scores and APS over a set of instances."""

    delta: list[np.ndarray]  # per instance, delta[i, j] = 1 if config j beats config i
    P: np.ndarray  # (instances, configs)
    aps: np.ndarray  # (configs,)


def significance_matrix(samples, alpha: float = ALPHA, method: str = "auto") -> np.ndarray:
    """delta[i, j] = 1 iff configuration j significantly outperforms i (diagonal 0)."""
    samples = [_sample(s, f"sample {i}") for i, s in enumerate(samples)]
    if len(samples) < 2:
        return np.zeros((len(samples), len(samples)), dtype=np.int64)
    n = len(samples)
    delta = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j and wilcoxon_rank_sum(samples[i], samples[j], method) < alpha:
                delta[i, j] = 1
    return delta


def performance_scores(samples, alpha: float = ALPHA, method: str = "auto") -> np.ndarray:
    """P(A_i): number of configurations significantly better than A_i on one instance."""
    return significance_matrix(samples, alpha, method).sum(axis=1)


def aps(P_per_instance) -> np.ndarray:
    """Average performance score per configuration over instances."""
    P = np.atleast_2d(np.asarray(P_per_instance, dtype=float))
    if P.size == 0:
        raise ValueError("need at least one instance")
    return P.mean(axis=0)


def stats_report(instances, alpha: float = ALPHA) -> StatsReport:
    """Scores for every instance; ``instances`` is a list of per-configuration sample lists."""
    deltas = [significance_matrix(s, alpha) for s in instances]
    P = np.array([d.sum(axis=1) for d in deltas])
    return StatsReport(delta=deltas, P=P, aps=aps(P))
