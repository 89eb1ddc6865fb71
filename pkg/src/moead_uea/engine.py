"""MOEA/D main loop with an unbounded external archive.

One child is produced per subproblem per generation. Every evaluated
solution is offered to the archive, so at any evaluation count the run
state yields both scenario views: the nondominated members of the
population and the reduced archive.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .archive import DEFAULT_B, Archive, Solution, nondominated_mask, reduce_indices
from .indicators import gd, hypervolume, igd, ms, normalize
from ._kernels import SCALARIZER_IDS, polynomial_mutation_row, replace_neighbors, sbx_first_child
from .problems import ProblemSpec
from .scalarize import NORMALIZATION_FLOOR, Scalarizer
from .weights import build_neighborhood, das_dennis, resolution_for_mu

# Default population size per number of objectives
DEFAULT_MU = {2: 200, 3: 210, 4: 220, 5: 210}


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemSpec
    mu: int
    scalarizer: Scalarizer = Scalarizer("chm")
    T: int = 20
    max_evals: int = 50_000
    seed: int = 0
    log_interval: int = 2_000
    pc: float = 1.0
    eta_c: float = 20.0
    pm: float | None = None  # None means 1 / D
    eta_m: float = 20.0
    b: int | None = None  # None means the default for M
    normalize: bool = True  # scale objectives by the population range before scalarizing

    def __post_init__(self):
        if not 1 <= self.T <= self.mu:
            raise ValueError(f"neighborhood size T={self.T} must satisfy 1 <= T <= mu={self.mu}")
        if self.max_evals < self.mu:
            raise ValueError(f"max_evals={self.max_evals} is smaller than the population size {self.mu}")
        if self.log_interval < 1:
            raise ValueError("log_interval must be positive")
        if not 0.0 <= self.pc <= 1.0:
            raise ValueError("pc must be in [0, 1]")
        if self.pm is not None and not 0.0 <= self.pm <= 1.0:
            raise ValueError("pm must be in [0, 1]")
        resolution_for_mu(self.problem.n_obj, self.mu)

    @property
    def mutation_rate(self) -> float:
        return 1.0 / self.problem.n_var if self.pm is None else self.pm

    @property
    def reduction_size(self) -> int:
        return DEFAULT_B[self.problem.n_obj] if self.b is None else self.b

    def canonical(self) -> dict:
        """JSON-ready description of everything except the seed."""
        spec = self.problem
        out = {
            "problem": spec.name,
            "n_obj": spec.n_obj,
            "k": spec.k,
            "l": spec.l,
            "mu": self.mu,
            "scalarizer": self.scalarizer.kind,
            "theta": self.scalarizer.theta,
            "T": self.T,
            "max_evals": self.max_evals,
            "log_interval": self.log_interval,
            "pc": self.pc,
            "eta_c": self.eta_c,
            "pm": self.mutation_rate,
            "eta_m": self.eta_m,
            "b": self.reduction_size,
        }
        if not self.normalize:
            # only non-default values enter, so digests of default configs stay stable
            out["normalize"] = False
        return out

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Snapshot:
    eval_count: int
    pop_front: np.ndarray  # nondominated objective vectors of the population
    uea_front: np.ndarray  # reduced archive
    archive_size: int
    hv_final_pop: float
    hv_reduced_uea: float
    extra: dict = field(default_factory=dict)  # gd/igd/ms per scenario when requested


@dataclass
class Population:
    """The μ current solutions; row i belongs to subproblem i."""

    X: np.ndarray
    F: np.ndarray

    def __len__(self) -> int:
        return len(self.X)

    @property
    def members(self) -> list[Solution]:
        return [Solution(self.X[i].copy(), self.F[i].copy()) for i in range(len(self.X))]


@dataclass
class RunTrace:
    config: RunConfig
    snapshots: list[Snapshot]
    final_population: Population
    final_archive: Archive
    replacements: list[int]  # per generation; the last one may be partial
    evaluations: int


class MOEAD:
    """Mutable state of one run; :func:`run` drives it to completion."""

    def __init__(self, config: RunConfig):
        self.config = config
        spec = config.problem
        self.spec = spec
        ws = das_dennis(spec.n_obj, resolution_for_mu(spec.n_obj, config.mu))
        self.W = ws.vectors
        self.B = build_neighborhood(ws, config.T).table
        self.rng = np.random.default_rng(config.seed)
        self.archive = Archive(spec.n_obj, spec.n_var)
        self.evals = 0
        self._pm = config.mutation_rate
        self._kind = SCALARIZER_IDS[config.scalarizer.kind]
        self._theta = float(config.scalarizer.theta or 0.0)

    def initialize(self):
        spec, mu = self.spec, self.config.mu
        self.X = spec.lower + self.rng.random((mu, spec.n_var)) * (spec.upper - spec.lower)
        self.F = np.array([spec.evaluate_row(x) for x in self.X])
        self.archive.extend(self.F, self.X, np.arange(1, mu + 1))
        self.evals = mu
        self.z = self.F.min(axis=0)
        self.start_generation()

    def start_generation(self):
        self.nadir = self.F.max(axis=0)

    def make_child(self, i: int) -> np.ndarray:
        """SBX (first child) of two distinct neighbors of i, then polynomial mutation."""
        T = self.config.T
        a = int(self.rng.integers(T))
        if T == 1:
            b = a  # the only neighbor is i itself; crossover is then a no-op
        else:
            b = int(self.rng.integers(T - 1))
            if b >= a:
                b += 1
        k, l = self.B[i, a], self.B[i, b]
        cfg, spec = self.config, self.spec
        u = self.rng.random((6, spec.n_var))
        child = sbx_first_child(self.X[k], self.X[l], u[:4], cfg.pc, cfg.eta_c, spec.lower, spec.upper)
        return polynomial_mutation_row(child, u[4:], self._pm, cfg.eta_m, spec.lower, spec.upper)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        f = self.spec.evaluate_row(x)
        self.evals += 1
        self.z = np.minimum(self.z, f)
        self.archive.add(f, x, self.evals)
        return f

    def scale(self) -> np.ndarray:
        """Per-objective divisor applied to f - z before scalarizing."""
        if not self.config.normalize:
            return np.ones(self.spec.n_obj)
        return np.maximum(self.nadir - self.z, NORMALIZATION_FLOOR)

    def scalarized(self, F, idx):
        """g values of objective rows F on subproblems idx, as seen by replacement (z = 0)."""
        return self.config.scalarizer((F - self.z) / self.scale(), self.W[idx], np.zeros(self.spec.n_obj))

    def replace(self, i: int, x: np.ndarray, f: np.ndarray) -> int:
        """Neighborhood replacement for child (x, f) of subproblem i; ties replace."""
        return replace_neighbors(
            self.X, self.F, self.W, self.B[i], x, f, self.z, self.scale(), self._kind, self._theta
        )

    def snapshot(self, reference=None) -> Snapshot:
        spec = self.spec
        pop = self.F[nondominated_mask(self.F)]
        pop = np.unique(pop, axis=0)
        arch = self.archive.objectives
        uea = arch[reduce_indices(arch, self.config.reduction_size, spec.ideal, spec.nadir)]
        snap = Snapshot(
            eval_count=self.evals,
            pop_front=pop,
            uea_front=uea.copy(),
            archive_size=len(self.archive),
            hv_final_pop=hypervolume(pop, spec.ideal, spec.nadir),
            hv_reduced_uea=hypervolume(uea, spec.ideal, spec.nadir),
        )
        if reference is not None:
            R = normalize(reference, spec.ideal, spec.nadir)
            for tag, pts in (("final_pop", pop), ("reduced_uea", uea)):
                A = normalize(pts, spec.ideal, spec.nadir)
                snap.extra[f"gd_{tag}"] = gd(A, R)
                snap.extra[f"igd_{tag}"] = igd(A, R)
                snap.extra[f"ms_{tag}"] = ms(A)
        return snap


def run(config: RunConfig, reference=None) -> RunTrace:
    """Execute one MOEA/D run and record a snapshot every ``log_interval`` evaluations.

    Passing a reference front adds GD, IGD and MS (normalized objectives)
    for both scenario views to every snapshot.
    """
    algo = MOEAD(config)
    algo.initialize()
    interval = config.log_interval
    snapshots: list[Snapshot] = []
    next_snap = interval
    if algo.evals >= next_snap:
        snapshots.append(algo.snapshot(reference))
        next_snap = (algo.evals // interval + 1) * interval
    replacements: list[int] = []
    while algo.evals < config.max_evals:
        algo.start_generation()
        count = 0
        for i in range(config.mu):
            x = algo.make_child(i)
            f = algo.evaluate(x)
            count += algo.replace(i, x, f)
            if algo.evals >= next_snap:
                snapshots.append(algo.snapshot(reference))
                next_snap = (algo.evals // interval + 1) * interval
            if algo.evals >= config.max_evals:
                break
        replacements.append(count)
    if not snapshots or snapshots[-1].eval_count < algo.evals:
        snapshots.append(algo.snapshot(reference))
    return RunTrace(
        config=config,
        snapshots=snapshots,
        final_population=Population(algo.X.copy(), algo.F.copy()),
        final_archive=algo.archive,
        replacements=replacements,
        evaluations=algo.evals,
    )


def replacement_count(trace: RunTrace) -> np.ndarray:
    """Neighborhood replacements per generation."""
    return np.asarray(trace.replacements, dtype=np.int64)
