"""Unbounded external archive and distance-based subset selection."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._kernels import archive_insert

# b per number of objectives for the reduced-archive view
DEFAULT_B = {2: 200, 3: 210, 4: 220, 5: 210}


@dataclass(frozen=True, eq=False)
class Solution:
    x: np.ndarray
    f: np.ndarray
    eval_index: int = -1


@dataclass(frozen=True)
class ReductionConfig:
    b: int

    @classmethod
    def for_objectives(cls, n_obj: int) -> "ReductionConfig":
        return cls(DEFAULT_B[n_obj])


def dominates(a, b) -> bool:
    """True when ``a`` Pareto-dominates ``b`` (minimization)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    """Mask of rows of F not dominated by any other row.

    Exact duplicates are all kept; use :func:`nondominated_unique` to
    collapse them.
    """
    F = np.asarray(F, dtype=float)
    n = len(F)
    if n == 0:
        return np.zeros(0, dtype=bool)
    keep = np.ones(n, dtype=bool)
    # Chunked to bound the (chunk, n, M) temporary.
    step = max(1, 2_000_000 // max(1, n * F.shape[1]))
    for start in range(0, n, step):
        block = F[start:start + step]
        le = np.all(F[None, :, :] <= block[:, None, :], axis=2)
        lt = np.any(F[None, :, :] < block[:, None, :], axis=2)
        keep[start:start + step] = ~np.any(le & lt, axis=1)
    return keep


def nondominated_unique(F: np.ndarray) -> np.ndarray:
    """Nondominated rows of F with duplicates removed (first occurrence kept)."""
    F = np.asarray(F, dtype=float)
    if len(F) == 0:
        return F.reshape(0, F.shape[-1] if F.ndim == 2 else 0)
    F = F[nondominated_mask(F)]
    _, first = np.unique(F, axis=0, return_index=True)
    return F[np.sort(first)]


class Archive:
    """Growable set of mutually nondominated solutions.

    Members are stored in insertion order; removal compacts the storage
    without reordering, so positions also encode insertion order.
    """

    def __init__(self, n_obj: int, n_var: int = 0, capacity: int = 1024):
        self.n_obj = n_obj
        self.n_var = n_var
        self._F = np.empty((capacity, n_obj))
        self._X = np.empty((capacity, n_var))
        self._eval = np.empty(capacity, dtype=np.int64)
        self._size = 0
        self._no_x = np.zeros(n_var)

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Solution]:
        for i in range(self._size):
            yield Solution(self._X[i].copy(), self._F[i].copy(), int(self._eval[i]))

    @property
    def objectives(self) -> np.ndarray:
        return self._F[: self._size]

    @property
    def decisions(self) -> np.ndarray:
        return self._X[: self._size]

    @property
    def eval_indices(self) -> np.ndarray:
        return self._eval[: self._size]

    def insert(self, s: Solution) -> bool:
        return self.add(s.f, s.x, s.eval_index)

    def add(self, f, x=None, eval_index: int = -1) -> bool:
        """Offer one solution; return True if it entered the archive.

        It is rejected when some member is no worse in every objective
        (dominated or duplicate); otherwise members it weakly dominates
        are removed and it is appended.
        """
        f = np.asarray(f, dtype=float)
        if f.shape != (self.n_obj,):
            raise ValueError(f"expected an objective vector of length {self.n_obj}, got shape {f.shape}")
        if self._size == len(self._F):
            self._grow()
        x = self._no_x if x is None or not self.n_var else np.asarray(x, dtype=float)
        size = archive_insert(self._F, self._X, self._eval, self._size, f, x, eval_index)
        if size < 0:
            return False
        self._size = size
        return True

    def extend(self, F, X=None, eval_indices=None) -> None:
        """Offer a batch of solutions in row order."""
        F = np.atleast_2d(np.asarray(F, dtype=float))
        for r in range(len(F)):
            self.add(F[r], None if X is None else X[r], -1 if eval_indices is None else int(eval_indices[r]))

    def _grow(self):
        cap = 2 * len(self._F)
        for name in ("_F", "_X"):
            old = getattr(self, name)
            new = np.empty((cap, old.shape[1]))
            new[: len(old)] = old
            setattr(self, name, new)
        ev = np.empty(cap, dtype=np.int64)
        ev[: len(self._eval)] = self._eval
        self._eval = ev

    def to_csv(self, path, include_decisions: bool = False) -> None:
        header = [f"f{i + 1}" for i in range(self.n_obj)]
        rows = self.objectives
        if include_decisions and self.n_var:
            header += [f"x{j + 1}" for j in range(self.n_var)]
            rows = np.hstack([rows, self.decisions])
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(v)) for v in row])

    @classmethod
    def from_points(cls, F, X=None) -> "Archive":
        F = np.atleast_2d(np.asarray(F, dtype=float))
        n_var = 0 if X is None else np.asarray(X).shape[1]
        arch = cls(F.shape[1], n_var, capacity=max(16, len(F)))
        for i, f in enumerate(F):
            arch.add(f, None if X is None else X[i], i)
        return arch


def reduce_indices(F: np.ndarray, b: int, ideal, nadir) -> np.ndarray:
    """Positions of the rows of F picked by extreme-seeded farthest-first selection.

    Objectives are normalized by (ideal, nadir). For every objective i the
    row minimizing f_i is taken (ties: smaller f_{i+1 mod M}, then earlier
    row); then the row with the largest distance to its nearest selected
    row is added until ``b`` rows are chosen (ties: earlier row). When F
    has at most ``b`` rows all positions are returned.
    """
    F = np.asarray(F, dtype=float)
    n, M = F.shape
    if n <= b:
        return np.arange(n)
    ideal = np.asarray(ideal, dtype=float)
    span = np.maximum(np.asarray(nadir, dtype=float) - ideal, 1e-12)
    N = (F - ideal) / span
    order = np.arange(n)
    selected: list[int] = []
    for i in range(M):
        best = int(np.lexsort((order, N[:, (i + 1) % M], N[:, i]))[0])
        if best not in selected:
            selected.append(best)
    selected = selected[:b]
    nearest = np.full(n, np.inf)
    for s in selected:
        nearest = np.minimum(nearest, np.sum((N - N[s]) ** 2, axis=1))
    while len(selected) < b:
        s = int(np.argmax(nearest))
        selected.append(s)
        nearest = np.minimum(nearest, np.sum((N - N[s]) ** 2, axis=1))
    return np.array(selected, dtype=np.int64)


def reduce(arch: Archive, cfg: ReductionConfig | int, ideal, nadir) -> list[Solution]:
    """The reduced-archive subset of ``arch`` as Solutions, in selection order."""
    b = cfg.b if isinstance(cfg, ReductionConfig) else int(cfg)
    idx = reduce_indices(arch.objectives, b, ideal, nadir)
    return [
        Solution(arch.decisions[i].copy(), arch.objectives[i].copy(), int(arch.eval_indices[i]))
        for i in idx
    ]
