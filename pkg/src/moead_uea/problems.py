"""DTLZ1-4 and WFG1-9 benchmark problems.

Every objective function here accepts either a single decision vector of
shape ``(D,)`` or a batch of shape ``(n, D)`` and returns ``(M,)`` or
``(n, M)`` respectively. WFG transformation parameters follow the
defaults of the original WFG toolkit (see ``WFG_PARAMETERS``).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._kernels import PROBLEM_IDS, evaluate_row
from .weights import das_dennis, lattice_size

DTLZ_NAMES = ("dtlz1", "dtlz2", "dtlz3", "dtlz4")
WFG_NAMES = tuple(f"wfg{i}" for i in range(1, 10))
PROBLEM_NAMES = DTLZ_NAMES + WFG_NAMES

# Problems whose Pareto front has a closed form we can sample.
ANALYTIC_FRONT = DTLZ_NAMES + ("wfg4", "wfg5", "wfg6", "wfg7", "wfg8", "wfg9")

DEFAULT_REFERENCE_SIZE = 10_000

WFG_PARAMETERS = {
    "s_linear": {"A": 0.35},
    "b_flat": {"A": 0.8, "B": 0.75, "C": 0.85},
    "b_poly": {"alpha": 0.02},
    "b_param": {"A": 0.98 / 49.98, "B": 0.02, "C": 50.0},
    "s_multi_wfg4": {"A": 30.0, "B": 10.0, "C": 0.35},
    "s_multi_wfg9": {"A": 30.0, "B": 95.0, "C": 0.35},
    "s_decept": {"A": 0.35, "B": 0.001, "C": 0.05},
    "mixed": {"A": 5.0, "alpha": 1.0},
    "disc": {"A": 5.0, "alpha": 1.0, "beta": 1.0},
    "DTLZ4_alpha": 100.0,
}


class ProblemError(ValueError):
    """Raised for unknown problems, bad dimensions or out-of-bounds input."""


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Static description of one benchmark instance."""

    name: str
    n_obj: int
    n_var: int
    k: int
    l: int
    lower: np.ndarray
    upper: np.ndarray
    ideal: np.ndarray
    nadir: np.ndarray
    objective: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    kernel_id: int = -1  # compiled single-row evaluator, -1 if none

    def evaluate_row(self, x: np.ndarray) -> np.ndarray:
        """Fast unchecked evaluation of one decision vector."""
        if self.kernel_id < 0:
            return self.objective(x)
        return evaluate_row(self.kernel_id, x, self.n_obj, self.k)

    @property
    def label(self) -> str:
        return f"{self.name}_m{self.n_obj}"


def evaluate(spec: ProblemSpec, x) -> np.ndarray:
    """Evaluate ``spec`` at ``x`` after checking shape and bounds."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (spec.n_var,) or x.ndim > 2:
        raise ProblemError(
            f"{spec.name}: expected decision vectors of length {spec.n_var}, got shape {x.shape}"
        )
    if np.any(x < spec.lower) or np.any(x > spec.upper):
        raise ProblemError(f"{spec.name}: decision vector outside [lower, upper]")
    return spec.objective(x)


def get_problem(name: str, n_obj: int, k: int | None = None, l: int | None = None) -> ProblemSpec:
    """Build the ProblemSpec for ``name`` with ``n_obj`` objectives.

    Without ``k``/``l`` the standard sizes are used: DTLZ1 k=5, DTLZ2-4
    k=10 (D = M + k - 1); WFG k = 2(M-1), l = 20 (D = k + l).
    """
    name = name.lower()
    if name not in PROBLEM_NAMES:
        raise ProblemError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEM_NAMES)}")
    if not 2 <= n_obj:
        raise ProblemError(f"n_obj must be >= 2, got {n_obj}")
    M = n_obj
    if name in DTLZ_NAMES:
        if l is not None:
            raise ProblemError("DTLZ problems have no distance-parameter count l")
        k = (5 if name == "dtlz1" else 10) if k is None else k
        if k < 1:
            raise ProblemError("k must be >= 1")
        D = M + k - 1
        lower = np.zeros(D)
        upper = np.ones(D)
        nadir = np.full(M, 0.5 if name == "dtlz1" else 1.0)
        func = _DTLZ[name]
        objective = lambda x, _f=func, _M=M: _batched(_f, x, _M)  # noqa: E731
        return ProblemSpec(name, M, D, k, 0, lower, upper, np.zeros(M), nadir, objective, PROBLEM_IDS[name])

    k = 2 * (M - 1) if k is None else k
    l = 20 if l is None else l
    if k < 1 or k % (M - 1) != 0:
        raise ProblemError("WFG position-parameter count k must be a positive multiple of M - 1")
    if l < 1:
        raise ProblemError("WFG distance-parameter count l must be >= 1")
    if name in ("wfg2", "wfg3") and l % 2 != 0:
        raise ProblemError("WFG2/WFG3 require an even distance-parameter count l")
    D = k + l
    lower = np.zeros(D)
    upper = 2.0 * np.arange(1, D + 1)
    nadir = 2.0 * np.arange(1, M + 1)
    func = _WFG[name]
    objective = lambda x, _f=func, _M=M, _k=k: _batched(_f, x, _M, _k)  # noqa: E731
    return ProblemSpec(name, M, D, k, l, lower, upper, np.zeros(M), nadir, objective, PROBLEM_IDS[name])


def _batched(func, x, *args):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return func(x[None, :], *args)[0]
    return func(x, *args)


# --------------------------------------------------------------------------
# DTLZ
# --------------------------------------------------------------------------


def _g_dtlz1(xm):
    k = xm.shape[1]
    return 100.0 * (k + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5)), axis=1))


def _g_dtlz2(xm):
    return np.sum((xm - 0.5) ** 2, axis=1)


def _linear_front(xp, M):
    # f_1 = prod(x_1..x_{M-1}); f_m = prod(x_1..x_{M-m}) (1 - x_{M-m+1})
    n = xp.shape[0]
    f = np.ones((n, M))
    for m in range(M):
        n_prod = M - 1 - m
        if n_prod > 0:
            f[:, m] = np.prod(xp[:, :n_prod], axis=1)
        if m > 0:
            f[:, m] *= 1.0 - xp[:, n_prod]
    return f


def _spherical_front(xp, M):
    n = xp.shape[0]
    f = np.ones((n, M))
    c = np.cos(0.5 * np.pi * xp)
    s = np.sin(0.5 * np.pi * xp)
    for m in range(M):
        n_prod = M - 1 - m
        if n_prod > 0:
            f[:, m] = np.prod(c[:, :n_prod], axis=1)
        if m > 0:
            f[:, m] *= s[:, n_prod]
    return f


def _dtlz1(x, M):
    g = _g_dtlz1(x[:, M - 1:])
    return 0.5 * _linear_front(x[:, : M - 1], M) * (1.0 + g)[:, None]


def _dtlz2(x, M):
    g = _g_dtlz2(x[:, M - 1:])
    return _spherical_front(x[:, : M - 1], M) * (1.0 + g)[:, None]


def _dtlz3(x, M):
    g = _g_dtlz1(x[:, M - 1:])
    return _spherical_front(x[:, : M - 1], M) * (1.0 + g)[:, None]


def _dtlz4(x, M):
    g = _g_dtlz2(x[:, M - 1:])
    xp = x[:, : M - 1] ** WFG_PARAMETERS["DTLZ4_alpha"]
    return _spherical_front(xp, M) * (1.0 + g)[:, None]


_DTLZ = {"dtlz1": _dtlz1, "dtlz2": _dtlz2, "dtlz3": _dtlz3, "dtlz4": _dtlz4}


# --------------------------------------------------------------------------
# WFG transformation functions (operate elementwise on arrays)
# --------------------------------------------------------------------------


def _correct_to_01(y, eps=1.0e-10):
    y = np.where((y < 0.0) & (y >= -eps), 0.0, y)
    return np.where((y > 1.0) & (y <= 1.0 + eps), 1.0, y)


def s_linear(y, A):
    return _correct_to_01(np.abs(y - A) / np.abs(np.floor(A - y) + A))


def s_decept(y, A, B, C):
    t1 = np.floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B)
    t2 = np.floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B)
    return _correct_to_01(1.0 + (np.abs(y - A) - B) * (t1 + t2 + 1.0 / B))


def s_multi(y, A, B, C):
    t = np.abs(y - C) / (2.0 * (np.floor(C - y) + C))
    return _correct_to_01((1.0 + np.cos((4.0 * A + 2.0) * np.pi * (0.5 - t)) + 4.0 * B * t**2) / (B + 2.0))


def b_flat(y, A, B, C):
    r = (
        A
        + np.minimum(0.0, np.floor(y - B)) * A * (B - y) / B
        - np.minimum(0.0, np.floor(C - y)) * (1.0 - A) * (y - C) / (1.0 - C)
    )
    return _correct_to_01(r)


def b_poly(y, alpha):
    return _correct_to_01(y**alpha)


def b_param(y, u, A, B, C):
    v = A - (1.0 - 2.0 * u) * np.abs(np.floor(0.5 - u) + A)
    return _correct_to_01(y ** (B + (C - B) * v))


def r_sum(y, w):
    return _correct_to_01(y @ w / w.sum())


def r_nonsep(y, A):
    n_cols = y.shape[1]
    total = y.sum(axis=1)
    for j in range(n_cols):
        for k in range(A - 1):
            total = total + np.abs(y[:, j] - y[:, (1 + j + k) % n_cols])
    half = np.ceil(A / 2.0)
    return _correct_to_01(total / (n_cols / A * half * (1.0 + 2.0 * A - 2.0 * half)))


# --------------------------------------------------------------------------
# WFG shapes: x holds the M - 1 position parameters after the last transform
# --------------------------------------------------------------------------


def _concave(xp, M):
    n = xp.shape[0]
    h = np.ones((n, M))
    s = np.sin(0.5 * np.pi * xp)
    c = np.cos(0.5 * np.pi * xp)
    for m in range(M):
        n_prod = M - 1 - m
        if n_prod > 0:
            h[:, m] = np.prod(s[:, :n_prod], axis=1)
        if m > 0:
            h[:, m] *= c[:, n_prod]
    return h


def _convex(xp, M):
    n = xp.shape[0]
    h = np.ones((n, M))
    c = 1.0 - np.cos(0.5 * np.pi * xp)
    s = 1.0 - np.sin(0.5 * np.pi * xp)
    for m in range(M):
        n_prod = M - 1 - m
        if n_prod > 0:
            h[:, m] = np.prod(c[:, :n_prod], axis=1)
        if m > 0:
            h[:, m] *= s[:, n_prod]
    return h


def _mixed(x1, A, alpha):
    return (1.0 - x1 - np.cos(2.0 * A * np.pi * x1 + 0.5 * np.pi) / (2.0 * A * np.pi)) ** alpha


def _disc(x1, A, alpha, beta):
    return 1.0 - x1**alpha * np.cos(A * x1**beta * np.pi) ** 2


def _group_reduce(y, M, k, reducer):
    """Apply ``reducer`` to each of the M - 1 position groups and the distance block."""
    gap = k // (M - 1)
    cols = [reducer(y[:, i * gap:(i + 1) * gap], i * gap) for i in range(M - 1)]
    cols.append(reducer(y[:, k:], k))
    return np.column_stack(cols)


def _sum_uniform(block, _offset):
    return r_sum(block, np.ones(block.shape[1]))


def _finish(t, M, S, h, degenerate=None):
    """Map the reduced vector t to objectives: f_m = t_M + S_m h_m."""
    A = np.ones(M - 1)
    if degenerate is not None:
        A = degenerate
    xM = t[:, -1]
    xp = np.maximum(xM[:, None], A) * (t[:, : M - 1] - 0.5) + 0.5
    return xM[:, None] + S * h(xp)


def _scales(M):
    return 2.0 * np.arange(1, M + 1)


def _wfg1(z, M, k):
    n = z.shape[1]
    y = z / (2.0 * np.arange(1, n + 1))
    y[:, k:] = s_linear(y[:, k:], **WFG_PARAMETERS["s_linear"])
    y[:, k:] = b_flat(y[:, k:], **WFG_PARAMETERS["b_flat"])
    y = b_poly(y, **WFG_PARAMETERS["b_poly"])
    w = 2.0 * np.arange(1, n + 1)
    t = _group_reduce(y, M, k, lambda b, off: r_sum(b, w[off:off + b.shape[1]]))

    def shape(xp):
        h = _convex(xp, M)
        h[:, -1] = _mixed(xp[:, 0], **WFG_PARAMETERS["mixed"])
        return h

    return _finish(t, M, _scales(M), shape)


def _wfg23_transform(z, k):
    n = z.shape[1]
    y = z / (2.0 * np.arange(1, n + 1))
    y[:, k:] = s_linear(y[:, k:], **WFG_PARAMETERS["s_linear"])
    l = n - k
    pairs = [r_nonsep(y[:, k + 2 * i:k + 2 * i + 2], 2) for i in range(l // 2)]
    return np.column_stack([y[:, :k]] + pairs)


def _wfg2(z, M, k):
    y = _wfg23_transform(z, k)
    t = _group_reduce(y, M, k, _sum_uniform)

    def shape(xp):
        h = _convex(xp, M)
        h[:, -1] = _disc(xp[:, 0], **WFG_PARAMETERS["disc"])
        return h

    return _finish(t, M, _scales(M), shape)


def _wfg3(z, M, k):
    y = _wfg23_transform(z, k)
    t = _group_reduce(y, M, k, _sum_uniform)
    A = np.zeros(M - 1)
    A[0] = 1.0
    return _finish(t, M, _scales(M), lambda xp: _linear_front(xp, M), degenerate=A)


def _wfg4(z, M, k):
    y = z / (2.0 * np.arange(1, z.shape[1] + 1))
    y = s_multi(y, **WFG_PARAMETERS["s_multi_wfg4"])
    t = _group_reduce(y, M, k, _sum_uniform)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


def _wfg5(z, M, k):
    y = z / (2.0 * np.arange(1, z.shape[1] + 1))
    y = s_decept(y, **WFG_PARAMETERS["s_decept"])
    t = _group_reduce(y, M, k, _sum_uniform)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


def _nonsep_groups(y, M, k):
    return _group_reduce(y, M, k, lambda b, _off: r_nonsep(b, b.shape[1]))


def _wfg6(z, M, k):
    y = z / (2.0 * np.arange(1, z.shape[1] + 1))
    y[:, k:] = s_linear(y[:, k:], **WFG_PARAMETERS["s_linear"])
    t = _nonsep_groups(y, M, k)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


def _tail_means(y):
    # mean of y[:, i+1:] for every i < n - 1
    n = y.shape[1]
    tail = np.cumsum(y[:, ::-1], axis=1)[:, ::-1]
    return tail[:, 1:] / np.arange(n - 1, 0, -1)


def _wfg7(z, M, k):
    y = z / (2.0 * np.arange(1, z.shape[1] + 1))
    u = _tail_means(y)[:, :k]
    y[:, :k] = b_param(y[:, :k], u, **WFG_PARAMETERS["b_param"])
    y[:, k:] = s_linear(y[:, k:], **WFG_PARAMETERS["s_linear"])
    t = _group_reduce(y, M, k, _sum_uniform)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


def _wfg8(z, M, k):
    n = z.shape[1]
    y = z / (2.0 * np.arange(1, n + 1))
    head = np.cumsum(y, axis=1)
    u = head[:, k - 1:n - 1] / np.arange(k, n)
    y[:, k:] = b_param(y[:, k:], u, **WFG_PARAMETERS["b_param"])
    y[:, k:] = s_linear(y[:, k:], **WFG_PARAMETERS["s_linear"])
    t = _group_reduce(y, M, k, _sum_uniform)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


def _wfg9(z, M, k):
    y = z / (2.0 * np.arange(1, z.shape[1] + 1))
    u = _tail_means(y)
    y[:, :-1] = b_param(y[:, :-1], u, **WFG_PARAMETERS["b_param"])
    y[:, :k] = s_decept(y[:, :k], **WFG_PARAMETERS["s_decept"])
    y[:, k:] = s_multi(y[:, k:], **WFG_PARAMETERS["s_multi_wfg9"])
    t = _nonsep_groups(y, M, k)
    return _finish(t, M, _scales(M), lambda xp: _concave(xp, M))


_WFG = {
    "wfg1": _wfg1, "wfg2": _wfg2, "wfg3": _wfg3, "wfg4": _wfg4, "wfg5": _wfg5,
    "wfg6": _wfg6, "wfg7": _wfg7, "wfg8": _wfg8, "wfg9": _wfg9,
}


# --------------------------------------------------------------------------
# Pareto fronts
# --------------------------------------------------------------------------


def reference_front(spec: ProblemSpec, n_points: int = DEFAULT_REFERENCE_SIZE) -> np.ndarray:
    """Sample at least ``n_points`` Pareto-optimal objective vectors.

    A simplex lattice with the smallest resolution giving ``n_points``
    vectors is projected onto the front: the hyperplane sum(f) = 0.5 for
    DTLZ1, the unit sphere for DTLZ2-4 and the ellipsoid
    sum((f_i / 2i)^2) = 1 for WFG4-9.
    """
    if spec.name not in ANALYTIC_FRONT:
        raise ProblemError(f"no analytic front for {spec.name}; use an empirical front instead")
    M = spec.n_obj
    H = 1
    while lattice_size(M, H) < n_points:
        H += 1
    W = das_dennis(M, H).vectors
    if spec.name == "dtlz1":
        return 0.5 * W
    P = W / np.linalg.norm(W, axis=1, keepdims=True)
    if spec.name.startswith("wfg"):
        P = P * _scales(M)
    return P


def save_points_csv(path, points: np.ndarray, prefix: str = "f") -> None:
    points = np.atleast_2d(points)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"{prefix}{i + 1}" for i in range(points.shape[1])])
        for row in points:
            writer.writerow([repr(float(v)) for v in row])
