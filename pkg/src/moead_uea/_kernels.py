"""Compiled single-row kernels for the per-child hot path.

The vectorized numpy code in the public modules is the readable
reference; tests check these kernels against it element for element.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

EPS01 = 1.0e-10

# problem ids
DTLZ1, DTLZ2, DTLZ3, DTLZ4 = 0, 1, 2, 3
WFG1, WFG2, WFG3, WFG4, WFG5, WFG6, WFG7, WFG8, WFG9 = 4, 5, 6, 7, 8, 9, 10, 11, 12
PROBLEM_IDS = {
    "dtlz1": DTLZ1, "dtlz2": DTLZ2, "dtlz3": DTLZ3, "dtlz4": DTLZ4,
    "wfg1": WFG1, "wfg2": WFG2, "wfg3": WFG3, "wfg4": WFG4, "wfg5": WFG5,
    "wfg6": WFG6, "wfg7": WFG7, "wfg8": WFG8, "wfg9": WFG9,
}

# scalarizer ids
CHM, CHD, PBI = 0, 1, 2
SCALARIZER_IDS = {"chm": CHM, "chd": CHD, "pbi": PBI}


# --------------------------------------------------------------------------
# problems
# --------------------------------------------------------------------------


@njit(cache=True)
def _c01(v):
    if v < 0.0 and v >= -EPS01:
        return 0.0
    if v > 1.0 and v <= 1.0 + EPS01:
        return 1.0
    return v


@njit(cache=True)
def _s_linear(y, A):
    return _c01(abs(y - A) / abs(math.floor(A - y) + A))


@njit(cache=True)
def _s_decept(y, A, B, C):
    t1 = math.floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B)
    t2 = math.floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B)
    return _c01(1.0 + (abs(y - A) - B) * (t1 + t2 + 1.0 / B))


@njit(cache=True)
def _s_multi(y, A, B, C):
    t = abs(y - C) / (2.0 * (math.floor(C - y) + C))
    return _c01((1.0 + math.cos((4.0 * A + 2.0) * math.pi * (0.5 - t)) + 4.0 * B * t * t) / (B + 2.0))


@njit(cache=True)
def _b_flat(y, A, B, C):
    r = (
        A
        + min(0.0, math.floor(y - B)) * A * (B - y) / B
        - min(0.0, math.floor(C - y)) * (1.0 - A) * (y - C) / (1.0 - C)
    )
    return _c01(r)


@njit(cache=True)
def _b_param(y, u, A, B, C):
    v = A - (1.0 - 2.0 * u) * abs(math.floor(0.5 - u) + A)
    return _c01(y ** (B + (C - B) * v))


@njit(cache=True)
def _r_nonsep(y, lo, hi, A):
    n = hi - lo
    total = 0.0
    for j in range(n):
        total += y[lo + j]
        for k in range(A - 1):
            total += abs(y[lo + j] - y[lo + (1 + j + k) % n])
    half = math.ceil(A / 2.0)
    return _c01(total / (n / A * half * (1.0 + 2.0 * A - 2.0 * half)))


@njit(cache=True)
def _mean01(y, lo, hi):
    s = 0.0
    for j in range(lo, hi):
        s += y[j]
    return _c01(s / (hi - lo))


@njit(cache=True)
def _uniform_groups(y, M, k, t):
    gap = k // (M - 1)
    for i in range(M - 1):
        t[i] = _mean01(y, i * gap, (i + 1) * gap)
    t[M - 1] = _mean01(y, k, y.size)


@njit(cache=True)
def _nonsep_groups(y, M, k, t):
    gap = k // (M - 1)
    for i in range(M - 1):
        t[i] = _r_nonsep(y, i * gap, (i + 1) * gap, gap)
    t[M - 1] = _r_nonsep(y, k, y.size, y.size - k)


@njit(cache=True)
def _position(t, M, degenerate):
    xM = t[M - 1]
    xp = np.empty(M - 1)
    for i in range(M - 1):
        a = 0.0 if (degenerate and i > 0) else 1.0
        xp[i] = max(xM, a) * (t[i] - 0.5) + 0.5
    return xp


@njit(cache=True)
def _concave(xp, M, h):
    for m in range(M):
        n_prod = M - 1 - m
        v = 1.0
        for j in range(n_prod):
            v *= math.sin(0.5 * math.pi * xp[j])
        if m > 0:
            v *= math.cos(0.5 * math.pi * xp[n_prod])
        h[m] = v


@njit(cache=True)
def _convex(xp, M, h):
    for m in range(M):
        n_prod = M - 1 - m
        v = 1.0
        for j in range(n_prod):
            v *= 1.0 - math.cos(0.5 * math.pi * xp[j])
        if m > 0:
            v *= 1.0 - math.sin(0.5 * math.pi * xp[n_prod])
        h[m] = v


@njit(cache=True)
def _linear(xp, M, h):
    for m in range(M):
        n_prod = M - 1 - m
        v = 1.0
        for j in range(n_prod):
            v *= xp[j]
        if m > 0:
            v *= 1.0 - xp[n_prod]
        h[m] = v


@njit(cache=True)
def _spherical(xp, M, h):
    for m in range(M):
        n_prod = M - 1 - m
        v = 1.0
        for j in range(n_prod):
            v *= math.cos(0.5 * math.pi * xp[j])
        if m > 0:
            v *= math.sin(0.5 * math.pi * xp[n_prod])
        h[m] = v


@njit(cache=True)
def _dtlz_row(pid, x, M):
    D = x.size
    g = 0.0
    if pid == DTLZ1 or pid == DTLZ3:
        kk = D - M + 1
        for j in range(M - 1, D):
            d = x[j] - 0.5
            g += d * d - math.cos(20.0 * math.pi * d)
        g = 100.0 * (kk + g)
    else:
        for j in range(M - 1, D):
            d = x[j] - 0.5
            g += d * d
    xp = x[: M - 1].copy()
    f = np.empty(M)
    if pid == DTLZ1:
        _linear(xp, M, f)
        for m in range(M):
            f[m] = 0.5 * f[m] * (1.0 + g)
        return f
    if pid == DTLZ4:
        for j in range(M - 1):
            xp[j] = xp[j] ** 100.0
    _spherical(xp, M, f)
    for m in range(M):
        f[m] *= 1.0 + g
    return f


@njit(cache=True)
def _wfg_row(pid, z, M, k):
    n = z.size
    y = np.empty(n)
    for j in range(n):
        y[j] = z[j] / (2.0 * (j + 1))
    t = np.empty(M)
    degenerate = False
    if pid == WFG1:
        for j in range(k, n):
            y[j] = _b_flat(_s_linear(y[j], 0.35), 0.8, 0.75, 0.85)
        for j in range(n):
            y[j] = _c01(y[j] ** 0.02)
        gap = k // (M - 1)
        for i in range(M):
            lo = i * gap
            hi = (i + 1) * gap if i < M - 1 else n
            if i == M - 1:
                lo = k
            num = 0.0
            den = 0.0
            for j in range(lo, hi):
                w = 2.0 * (j + 1)
                num += w * y[j]
                den += w
            t[i] = _c01(num / den)
    elif pid == WFG2 or pid == WFG3:
        for j in range(k, n):
            y[j] = _s_linear(y[j], 0.35)
        l = n - k
        r = np.empty(k + l // 2)
        for j in range(k):
            r[j] = y[j]
        for i in range(l // 2):
            r[k + i] = _r_nonsep(y, k + 2 * i, k + 2 * i + 2, 2)
        _uniform_groups(r, M, k, t)
        degenerate = pid == WFG3
    elif pid == WFG4:
        for j in range(n):
            y[j] = _s_multi(y[j], 30.0, 10.0, 0.35)
        _uniform_groups(y, M, k, t)
    elif pid == WFG5:
        for j in range(n):
            y[j] = _s_decept(y[j], 0.35, 0.001, 0.05)
        _uniform_groups(y, M, k, t)
    elif pid == WFG6:
        for j in range(k, n):
            y[j] = _s_linear(y[j], 0.35)
        _nonsep_groups(y, M, k, t)
    elif pid == WFG7:
        u = np.empty(k)
        tail = 0.0
        for j in range(n - 1, 0, -1):
            tail += y[j]
            if j - 1 < k:
                u[j - 1] = tail / (n - j)
        for j in range(k):
            y[j] = _b_param(y[j], u[j], 0.98 / 49.98, 0.02, 50.0)
        for j in range(k, n):
            y[j] = _s_linear(y[j], 0.35)
        _uniform_groups(y, M, k, t)
    elif pid == WFG8:
        head = 0.0
        u = np.empty(n)
        for j in range(n):
            u[j] = head / j if j > 0 else 0.0
            head += y[j]
        for j in range(k, n):
            y[j] = _s_linear(_b_param(y[j], u[j], 0.98 / 49.98, 0.02, 50.0), 0.35)
        _uniform_groups(y, M, k, t)
    else:  # WFG9
        u = np.empty(n)
        tail = 0.0
        for j in range(n - 1, 0, -1):
            tail += y[j]
            u[j - 1] = tail / (n - j)
        for j in range(n - 1):
            y[j] = _b_param(y[j], u[j], 0.98 / 49.98, 0.02, 50.0)
        for j in range(k):
            y[j] = _s_decept(y[j], 0.35, 0.001, 0.05)
        for j in range(k, n):
            y[j] = _s_multi(y[j], 30.0, 95.0, 0.35)
        _nonsep_groups(y, M, k, t)
    xp = _position(t, M, degenerate)
    h = np.empty(M)
    if pid == WFG1:
        _convex(xp, M, h)
        x1 = xp[0]
        h[M - 1] = 1.0 - x1 - math.cos(10.0 * math.pi * x1 + 0.5 * math.pi) / (10.0 * math.pi)
    elif pid == WFG2:
        _convex(xp, M, h)
        x1 = xp[0]
        c = math.cos(5.0 * x1 * math.pi)
        h[M - 1] = 1.0 - x1 * c * c
    elif pid == WFG3:
        _linear(xp, M, h)
    else:
        _concave(xp, M, h)
    f = np.empty(M)
    for m in range(M):
        f[m] = t[M - 1] + 2.0 * (m + 1) * h[m]
    return f


@njit(cache=True)
def evaluate_row(pid, x, M, k):
    if pid <= DTLZ4:
        return _dtlz_row(pid, x, M)
    return _wfg_row(pid, x, M, k)


@njit(cache=True)
def evaluate_rows(pid, X, M, k):
    out = np.empty((X.shape[0], M))
    for r in range(X.shape[0]):
        out[r] = evaluate_row(pid, X[r], M, k)
    return out


# --------------------------------------------------------------------------
# variation: consumes the same uniform draws as the numpy operators
# --------------------------------------------------------------------------


@njit(cache=True)
def sbx_first_child(p1, p2, u, pc, eta_c, lower, upper):
    """First SBX child from draws u of shape (4, D)."""
    D = p1.size
    c = p1.copy()
    if u[0, 0] > pc or pc == 0.0:
        return c
    expo = 1.0 / (eta_c + 1.0)
    for j in range(D):
        if u[1, j] <= 0.5 and abs(p1[j] - p2[j]) > 1.0e-14:
            r = u[2, j]
            if r <= 0.5:
                beta = (2.0 * r) ** expo
            else:
                beta = (1.0 / (2.0 * (1.0 - r))) ** expo
            if u[3, j] <= 0.5:
                v = 0.5 * ((1.0 - beta) * p1[j] + (1.0 + beta) * p2[j])
            else:
                v = 0.5 * ((1.0 + beta) * p1[j] + (1.0 - beta) * p2[j])
            c[j] = min(max(v, lower[j]), upper[j])
    return c


@njit(cache=True)
def polynomial_mutation_row(x, u, pm, eta_m, lower, upper):
    """Polynomial mutation from draws u of shape (2, D)."""
    y = x.copy()
    expo = 1.0 / (eta_m + 1.0)
    for j in range(x.size):
        if u[0, j] < pm:
            span = upper[j] - lower[j]
            r = u[1, j]
            if r < 0.5:
                d1 = (x[j] - lower[j]) / span
                val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1) ** (eta_m + 1.0)
                dq = val**expo - 1.0
            else:
                d2 = (upper[j] - x[j]) / span
                val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2) ** (eta_m + 1.0)
                dq = 1.0 - val**expo
            y[j] = min(max(x[j] + dq * span, lower[j]), upper[j])
    return y


# --------------------------------------------------------------------------
# scalarization and replacement
# --------------------------------------------------------------------------


@njit(cache=True)
def scalar_value(kind, theta, fn, w):
    """g(fn | w) with z = 0 for an already normalized objective vector."""
    M = fn.size
    if kind == CHM:
        g = -np.inf
        for i in range(M):
            g = max(g, w[i] * abs(fn[i]))
        return g
    if kind == CHD:
        g = -np.inf
        for i in range(M):
            wi = max(w[i], 1.0e-6)
            g = max(g, abs(fn[i]) / wi)
        return g
    norm = 0.0
    for i in range(M):
        norm += w[i] * w[i]
    norm = math.sqrt(norm)
    d1 = 0.0
    for i in range(M):
        d1 += fn[i] * w[i] / norm
    d1 = abs(d1)
    d2 = 0.0
    for i in range(M):
        e = fn[i] - d1 * w[i] / norm
        d2 += e * e
    return d1 + theta * math.sqrt(d2)


@njit(cache=True)
def replace_neighbors(X, F, W, nb, x, f, z, scale, kind, theta):
    """Replace every x^j, j in nb, with g(f|w^j) <= g(f^j|w^j); return the count.

    Objectives enter the scalarizer as (f - z) / scale.
    """
    M = f.size
    fn = np.empty(M)
    for i in range(M):
        fn[i] = (f[i] - z[i]) / scale[i]
    on = np.empty(M)
    count = 0
    for j in nb:
        for i in range(M):
            on[i] = (F[j, i] - z[i]) / scale[i]
        if scalar_value(kind, theta, fn, W[j]) <= scalar_value(kind, theta, on, W[j]):
            X[j, :] = x
            F[j, :] = f
            count += 1
    return count


# --------------------------------------------------------------------------
# archive
# --------------------------------------------------------------------------


@njit(cache=True)
def archive_insert(AF, AX, AE, size, f, x, e):
    """Insert (f, x, e) into the first ``size`` rows; return the new size or -1 if rejected.

    One pass both rejects and compacts: if a member weakly dominates f,
    no earlier member can have been covered by f (members are mutually
    nondominated), so nothing was moved yet. The caller guarantees one
    free row.
    """
    M = f.size
    w = 0
    for r in range(size):
        member_le = True
        member_ge = True
        for i in range(M):
            a = AF[r, i]
            if a > f[i]:
                member_le = False
                if not member_ge:
                    break
            elif a < f[i]:
                member_ge = False
                if not member_le:
                    break
        if member_le:
            return -1
        if not member_ge:
            if w != r:
                AF[w, :] = AF[r, :]
                AX[w, :] = AX[r, :]
                AE[w] = AE[r]
            w += 1
    AF[w, :] = f
    AX[w, :] = x
    AE[w] = e
    return w + 1
