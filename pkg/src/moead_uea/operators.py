"""SBX crossover and polynomial mutation for box-bounded real vectors."""

from __future__ import annotations

import numpy as np

SBX_EPS = 1.0e-14


def sbx_crossover(p1, p2, pc: float, eta_c: float, bounds, rng: np.random.Generator, clip: bool = True):
    """Simulated binary crossover returning two children.

    With probability ``pc`` the parents are recombined; each variable is
    then crossed with probability 0.5 using the symmetric spread factor
    beta, so c1 + c2 = p1 + p2 before clipping, and the two child values
    are swapped with probability 0.5. Otherwise copies of the parents are
    returned.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    c1 = p1.copy()
    c2 = p2.copy()
    u = rng.random((4, p1.size))
    if u[0, 0] > pc or pc == 0.0:
        return c1, c2
    cross = (u[1] <= 0.5) & (np.abs(p1 - p2) > SBX_EPS)
    r = u[2]
    expo = 1.0 / (eta_c + 1.0)
    beta = np.where(r <= 0.5, (2.0 * r) ** expo, (1.0 / (2.0 * (1.0 - r))) ** expo)
    a = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    b = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    swap = u[3] <= 0.5
    c1 = np.where(cross, np.where(swap, b, a), p1)
    c2 = np.where(cross, np.where(swap, a, b), p2)
    if clip:
        lower, upper = bounds
        c1 = np.clip(c1, lower, upper)
        c2 = np.clip(c2, lower, upper)
    return c1, c2


def polynomial_mutation(x, pm: float, eta_m: float, bounds, rng: np.random.Generator):
    """Bounded polynomial mutation applied gene-wise with probability ``pm``."""
    x = np.asarray(x, dtype=float)
    lower, upper = bounds
    u = rng.random((2, x.size))
    mutate = u[0] < pm
    if not np.any(mutate):
        return x.copy()
    span = upper - lower
    d1 = (x - lower) / span
    d2 = (upper - x) / span
    r = u[1]
    expo = 1.0 / (eta_m + 1.0)
    low_side = r < 0.5
    val_low = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1) ** (eta_m + 1.0)
    val_high = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2) ** (eta_m + 1.0)
    dq = np.where(low_side, val_low**expo - 1.0, 1.0 - val_high**expo)
    y = np.where(mutate, x + dq * span, x)
    return np.clip(y, lower, upper)
