"""Simplex-lattice weight vectors and weight-space neighborhoods."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np


class InfeasiblePopulationSize(ValueError):
    """``mu`` is not the size of any simplex lattice for the given M."""

    def __init__(self, n_obj: int, mu: int, lower: int | None, upper: int):
        self.n_obj = n_obj
        self.mu = mu
        self.lower = lower
        self.upper = upper
        nearest = f"{lower} and {upper}" if lower is not None else f"{upper}"
        super().__init__(
            f"population size {mu} is not achievable with {n_obj} objectives; "
            f"nearest achievable sizes are {nearest}"
        )


@dataclass(frozen=True, eq=False)
class WeightSet:
    vectors: np.ndarray
    H: int

    def __len__(self) -> int:
        return len(self.vectors)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"w{j + 1}" for j in range(self.vectors.shape[1])])
            writer.writerows(self.vectors.tolist())


@dataclass(frozen=True, eq=False)
class Neighborhood:
    T: int
    table: np.ndarray  # (mu, T) int, row i is B^i, closest first


def lattice_size(n_obj: int, H: int) -> int:
    return comb(H + n_obj - 1, n_obj - 1)


def das_dennis(n_obj: int, H: int) -> WeightSet:
    """All weight vectors h / H with h a composition of H into n_obj parts.

    Vectors come in descending lexicographic order of the composition,
    so (M=3, H=1) yields (1,0,0), (0,1,0), (0,0,1).
    """
    if n_obj < 2 or H < 1:
        raise ValueError(f"das_dennis needs n_obj >= 2 and H >= 1, got n_obj={n_obj}, H={H}")
    slots = H + n_obj - 1
    # Stars and bars: bar positions in lexicographic order map to
    # compositions in lexicographic order.
    bars = np.array(list(itertools.combinations(range(slots), n_obj - 1)), dtype=np.int64)
    bars = bars.reshape(-1, n_obj - 1)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), slots)])
    counts = np.diff(edges, axis=1) - 1
    return WeightSet(vectors=counts[::-1] / H, H=H)


def resolution_for_mu(n_obj: int, mu: int) -> int:
    """Return the lattice resolution H with C(H + M - 1, M - 1) == mu."""
    if n_obj < 2:
        raise ValueError("n_obj must be >= 2")
    previous = None
    H = 1
    while True:
        size = lattice_size(n_obj, H)
        if size == mu:
            return H
        if size > mu:
            raise InfeasiblePopulationSize(n_obj, mu, previous, size)
        previous = size
        H += 1


def build_neighborhood(ws: WeightSet | np.ndarray, T: int) -> Neighborhood:
    """Indices of the T closest weight vectors (Euclidean), ties to the lower index."""
    if isinstance(ws, WeightSet):
        # Integer compositions give exact distances, so ties are real ties.
        W = np.rint(ws.vectors * ws.H)
    else:
        W = np.asarray(ws, dtype=float)
    mu = len(W)
    if not 1 <= T <= mu:
        raise ValueError(f"neighborhood size T must be in [1, {mu}], got {T}")
    d2 = np.sum((W[:, None, :] - W[None, :, :]) ** 2, axis=2)
    order = np.argsort(d2, axis=1, kind="stable")[:, :T]
    return Neighborhood(T=T, table=order)
