"""Quality indicators: normalized hypervolume, GD, IGD and MS.

Hypervolume inputs are normalized by (ideal, nadir) and measured against
the reference point (1.1, ..., 1.1); the result is divided by 1.1^M so a
single point at the ideal scores 1.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .archive import nondominated_mask

HV_REFERENCE = 1.1


@dataclass
class IndicatorReport:
    hv: float
    gd: float | None = None
    igd: float | None = None
    ms: float | None = None


def normalize(points, ideal, nadir) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    ideal = np.asarray(ideal, dtype=float)
    return (points - ideal) / (np.asarray(nadir, dtype=float) - ideal)


def hypervolume(points, ideal, nadir) -> float:
    """Normalized hypervolume of ``points`` in [0, 1]."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return 0.0
    N = normalize(points, ideal, nadir)
    M = N.shape[1]
    N = N[np.all(N < HV_REFERENCE, axis=1)]
    if len(N) == 0:
        return 0.0
    ref = np.full(M, HV_REFERENCE)
    return exact_hypervolume(N, ref) / HV_REFERENCE**M


def exact_hypervolume(points, ref) -> float:
    """Exact Lebesgue measure dominated by ``points`` and bounded by ``ref``.

    Points not strictly better than ``ref`` in every objective are
    ignored. The computation slices along the last objective: with points
    sorted from worst to best in that objective, each point's exclusive
    contribution is its slab thickness times the (M-1)-dimensional
    exclusive volume against the points that follow, found recursively
    on the limited (componentwise max) set.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    ref = np.asarray(ref, dtype=float)
    P = P[np.all(P < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    P = _unique_nondominated(P)
    return float(_hv(P, ref))


def _unique_nondominated(P):
    """Drop dominated rows and all but the first copy of duplicated rows."""
    n = len(P)
    if n <= 1:
        return P
    le = np.all(P[None, :, :] <= P[:, None, :], axis=2)  # le[i, j]: P_j <= P_i
    earlier = np.tri(n, k=-1, dtype=bool)  # earlier[i, j]: j < i
    # P_j dominates P_i unless the two are equal; equal copies keep the first
    return P[~np.any(le & (~le.T | earlier), axis=1)]


def _hv2d(P, ref):
    order = np.argsort(P[:, 0], kind="stable")
    x = P[order, 0]
    y = np.minimum.accumulate(P[order, 1])
    widths = np.diff(np.append(x, ref[0]))
    return float(np.sum(widths * (ref[1] - y)))


def _hv3d(P, ref):
    """Sweep upward in f3 while maintaining the 2-D staircase of (f1, f2).

    Dominated or repeated points add zero area, so the input need not be
    filtered.
    """
    P = P[np.argsort(P[:, 2], kind="stable")]
    rx, ry, rz = float(ref[0]), float(ref[1]), float(ref[2])
    xs: list[float] = []  # staircase, x ascending and y descending
    ys: list[float] = []
    area = 0.0
    total = 0.0
    rows = P.tolist()
    for k, (px, py, pz) in enumerate(rows):
        a = bisect_right(xs, px) - 1
        if a >= 0 and ys[a] <= py:
            gain = 0.0
        else:
            level = ys[a] if a >= 0 else ry
            b = a + 1
            left = px
            gain = 0.0
            while b < len(xs) and ys[b] >= py:
                gain += (xs[b] - left) * (level - py)
                left = xs[b]
                level = ys[b]
                b += 1
            right = xs[b] if b < len(xs) else rx
            gain += (right - left) * (level - py)
            xs[a + 1:b] = [px]
            ys[a + 1:b] = [py]
        area += gain
        next_z = rows[k + 1][2] if k + 1 < len(rows) else rz
        total += (next_z - pz) * area
    return total


def _hv(P, ref):
    n, m = P.shape
    if n == 1:
        return float(np.prod(ref - P[0]))
    if m == 2:
        return _hv2d(P, ref)
    if m == 3:
        return _hv3d(P, ref)
    if n == 2:
        a, b = P
        return float(np.prod(ref - a) + np.prod(ref - b) - np.prod(ref - np.maximum(a, b)))
    P = P[np.argsort(-P[:, -1], kind="stable")]
    head = P[:, :-1]
    sub_ref = ref[:-1]
    boxes = np.prod(sub_ref - head, axis=1)
    total = 0.0
    # The 3-D sweep tolerates dominated and repeated points, so small limited
    # sets skip the quadratic filter.
    prune = m > 4
    for k in range(n - 1):
        limited = np.maximum(head[k + 1:], head[k])
        if np.any(np.all(limited == head[k], axis=1)):
            continue  # a later point covers this one's whole cross-section
        if prune:
            limited = _unique_nondominated(limited)
        excl = boxes[k] - _hv(limited, sub_ref)
        total += (ref[-1] - P[k, -1]) * excl
    total += (ref[-1] - P[-1, -1]) * boxes[-1]
    return total


def _check_nonempty(A, name):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        raise ValueError(f"{name} must be nonempty")
    return A


def gd(A, Astar) -> float:
    """Mean distance from each point of A to its nearest reference point."""
    A = _check_nonempty(A, "A")
    Astar = _check_nonempty(Astar, "reference set")
    dist, _ = cKDTree(Astar).query(A)
    return float(np.mean(dist))


def igd(A, Astar) -> float:
    """Mean distance from each reference point to its nearest point of A."""
    A = _check_nonempty(A, "A")
    Astar = _check_nonempty(Astar, "reference set")
    dist, _ = cKDTree(A).query(Astar)
    return float(np.mean(dist))


def ms(A) -> float:
    """Root of the summed squared per-objective ranges of A."""
    A = _check_nonempty(A, "A")
    return float(np.sqrt(np.sum((A.max(axis=0) - A.min(axis=0)) ** 2)))


def report(points, ideal, nadir, reference=None) -> IndicatorReport:
    """HV plus, when a reference front is given, GD/IGD/MS on normalized objectives."""
    rep = IndicatorReport(hv=hypervolume(points, ideal, nadir))
    if reference is not None and len(points):
        A = normalize(points, ideal, nadir)
        R = normalize(reference, ideal, nadir)
        rep.gd, rep.igd, rep.ms = gd(A, R), igd(A, R), ms(A)
    return rep
