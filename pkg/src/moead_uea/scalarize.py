"""Scalarizing functions, ideal-point tracking and objective normalization.

All functions broadcast: ``f`` may be ``(M,)`` or ``(n, M)`` and ``w`` may
be ``(M,)`` or ``(n, M)``; the result has the broadcast leading shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCALARIZERS = ("chm", "chd", "pbi")
DEFAULT_THETA = 5.0
ZERO_WEIGHT = 1.0e-6
NORMALIZATION_FLOOR = 1.0e-12


def _check(f, w, z):
    f = np.asarray(f, dtype=float)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    M = f.shape[-1]
    if w.shape[-1] != M or z.shape[-1] != M:
        raise ValueError(
            f"dimension mismatch: f has {M} objectives, w has {w.shape[-1]}, z has {z.shape[-1]}"
        )
    return f, w, z


def g_chm(f, w, z):
    """Chebyshev function, multiplication form: max_i w_i |f_i - z_i|."""
    f, w, z = _check(f, w, z)
    return np.max(w * np.abs(f - z), axis=-1)


def g_chd(f, w, z):
    """Chebyshev function, division form: max_i |f_i - z_i| / max(w_i, 1e-6)."""
    f, w, z = _check(f, w, z)
    return np.max(np.abs(f - z) / np.maximum(w, ZERO_WEIGHT), axis=-1)


def g_pbi(f, w, z, theta=DEFAULT_THETA):
    """Penalty-based boundary intersection d1 + theta * d2.

    d1 is the length of the projection of f - z on w, d2 the distance from
    f to the point z + d1 w / |w|.
    """
    f, w, z = _check(f, w, z)
    norm = np.linalg.norm(w, axis=-1, keepdims=True)
    if np.any(norm == 0.0):
        raise ValueError("PBI needs a nonzero weight vector")
    direction = w / norm
    diff = f - z
    d1 = np.abs(np.sum(diff * direction, axis=-1))
    d2 = np.linalg.norm(diff - d1[..., None] * direction, axis=-1)
    return d1 + theta * d2


@dataclass(frozen=True)
class Scalarizer:
    """A configured scalarizing function; ``theta`` only for ``pbi``."""

    kind: str
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in SCALARIZERS:
            raise ValueError(f"unknown scalarizer {self.kind!r}; expected one of {SCALARIZERS}")
        if self.kind == "pbi":
            if self.theta is None:
                object.__setattr__(self, "theta", DEFAULT_THETA)
            if not self.theta > 0:
                raise ValueError(f"PBI penalty theta must be > 0, got {self.theta}")
        elif self.theta is not None:
            raise ValueError(f"theta only applies to pbi, not {self.kind}")

    def __call__(self, f, w, z):
        if self.kind == "chm":
            return g_chm(f, w, z)
        if self.kind == "chd":
            return g_chd(f, w, z)
        return g_pbi(f, w, z, self.theta)

    @property
    def label(self) -> str:
        return f"pbi({self.theta:g})" if self.kind == "pbi" else self.kind


def initial_ideal(n_obj: int) -> np.ndarray:
    return np.full(n_obj, np.inf)


def update_ideal(z, f) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    f = np.asarray(f, dtype=float)
    if z.shape[-1] != f.shape[-1]:
        raise ValueError("dimension mismatch between ideal point and objective vector")
    if f.ndim == 2:
        f = f.min(axis=0)
    return np.minimum(z, f)


def normalize_objectives(f, z, z_nad):
    """(f - z) / max(z_nad - z, 1e-12), componentwise."""
    f = np.asarray(f, dtype=float)
    z = np.asarray(z, dtype=float)
    return (f - z) / np.maximum(np.asarray(z_nad, dtype=float) - z, NORMALIZATION_FLOOR)
