"""Experiment orchestration: run records, sweeps and reports.

A run record is a JSONL file with one ``snapshot`` line per logged
evaluation count followed by one ``summary`` line. Sweeps write one
record per (configuration, seed) named by config digest and run index,
so interrupted sweeps resume by skipping records that already verify.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .archive import DEFAULT_B, nondominated_unique
from .engine import DEFAULT_MU, RunConfig, RunTrace, run
from .problems import ANALYTIC_FRONT, get_problem, reference_front
from .scalarize import DEFAULT_THETA, Scalarizer
from .stats import ALPHA, aps, performance_scores

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
OUTPUT_ENV = "MOEAD_UEA_OUTPUT"
SCENARIOS = ("final_pop", "reduced_uea")

MU_GRID = {
    2: (25, 50, 100, 200, 300, 400),
    3: (28, 55, 105, 210, 300, 406),
    4: (35, 56, 120, 220, 286, 455),
    5: (126, 210, 330, 495),
}
THETA_GRID = (0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 10.0)
T_GRID = (10, 20, 40, 80)
DEFAULT_RUNS = 31
DEFAULT_T = 20


class RecordError(ValueError):
    """A run record or record directory is malformed or inconsistent."""


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "moead_output"))


def run_seed(base_seed: int, run_index: int) -> int:
    """Seed of the run_index-th run: base seed XOR run index."""
    return int(base_seed) ^ int(run_index)


# --------------------------------------------------------------------------
# records
# --------------------------------------------------------------------------


def trace_records(trace: RunTrace, wall_time: float) -> list[dict]:
    """JSON-ready lines of one run: snapshots, then a summary."""
    cfg = trace.config
    digest = cfg.digest()
    lines = []
    for s in trace.snapshots:
        rec = {
            "type": "snapshot",
            "digest": digest,
            "seed": cfg.seed,
            "eval_count": s.eval_count,
            "hv_final_pop": s.hv_final_pop,
            "hv_reduced_uea": s.hv_reduced_uea,
            "archive_size": s.archive_size,
            "n_final_pop": len(s.pop_front),
        }
        rec.update(s.extra)
        lines.append(rec)
    last = trace.snapshots[-1]
    lines.append(
        {
            "type": "summary",
            "schema": SCHEMA_VERSION,
            "digest": digest,
            "seed": cfg.seed,
            "config": cfg.canonical(),
            "evaluations": trace.evaluations,
            "n_snapshots": len(trace.snapshots),
            "final_pop_front": last.pop_front.tolist(),
            "reduced_uea_front": last.uea_front.tolist(),
            "replacements": [int(r) for r in trace.replacements],
            "wall_time": wall_time,
        }
    )
    return lines


def write_jsonl(path, lines) -> None:
    """Write JSONL atomically (temporary file then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(json.dumps(line, sort_keys=True) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunRecord:
    digest: str
    seed: int
    config: dict
    snapshots: list[dict]
    summary: dict

    @property
    def eval_counts(self) -> list[int]:
        return [s["eval_count"] for s in self.snapshots]

    def series(self, scenario: str) -> np.ndarray:
        return np.array([s[f"hv_{scenario}"] for s in self.snapshots])

    @property
    def wall_time(self) -> float:
        return float(self.summary["wall_time"])


def read_record(path) -> RunRecord:
    """Load and verify one record; raises RecordError if incomplete or inconsistent."""
    path = Path(path)
    snaps, summary = [], None
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                if not raw.strip():
                    continue
                try:
                    rec = json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise RecordError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                kind = rec.get("type")
                if kind == "snapshot":
                    snaps.append(rec)
                elif kind == "summary":
                    summary = rec
                else:
                    raise RecordError(f"{path}:{lineno}: unknown record type {kind!r}")
    except OSError as exc:
        raise RecordError(f"{path}: {exc}") from None
    if summary is None:
        raise RecordError(f"{path}: missing summary line")
    if summary.get("schema") != SCHEMA_VERSION:
        raise RecordError(f"{path}: schema {summary.get('schema')!r}, expected {SCHEMA_VERSION}")
    if len(snaps) != summary["n_snapshots"]:
        raise RecordError(f"{path}: {len(snaps)} snapshots, summary says {summary['n_snapshots']}")
    for s in snaps:
        if s["digest"] != summary["digest"] or s["seed"] != summary["seed"]:
            raise RecordError(f"{path}: snapshot digest/seed does not match summary")
    return RunRecord(summary["digest"], summary["seed"], summary["config"], snaps, summary)


def load_records(directory) -> list[RunRecord]:
    directory = Path(directory)
    if not directory.is_dir():
        raise RecordError(f"{directory}: not a directory")
    recs = [read_record(p) for p in sorted(directory.glob("*.jsonl"))]
    if not recs:
        raise RecordError(f"{directory}: no run records")
    return recs


# --------------------------------------------------------------------------
# single runs
# --------------------------------------------------------------------------


def build_config(cell: dict, seed: int) -> RunConfig:
    """RunConfig from a sweep cell (plain dict of parameters)."""
    spec = get_problem(cell["problem"], cell["n_obj"], cell.get("k"), cell.get("l"))
    theta = cell.get("theta") if cell["scalarizer"] == "pbi" else None
    return RunConfig(
        problem=spec,
        mu=cell["mu"],
        scalarizer=Scalarizer(cell["scalarizer"], theta),
        T=cell.get("T", DEFAULT_T),
        max_evals=cell.get("max_evals", 50_000),
        seed=seed,
        log_interval=cell.get("log_interval", 2_000),
        pc=cell.get("pc", 1.0),
        eta_c=cell.get("eta_c", 20.0),
        pm=cell.get("pm"),
        eta_m=cell.get("eta_m", 20.0),
        b=cell.get("b"),
        normalize=cell.get("normalize", True),
    )


_REFERENCE_CACHE: dict = {}


def reference_for(config: RunConfig):
    spec = config.problem
    if spec.name not in ANALYTIC_FRONT:
        raise ValueError(f"GD/IGD need a reference front; none is available for {spec.name}")
    key = (spec.name, spec.n_obj)
    if key not in _REFERENCE_CACHE:
        _REFERENCE_CACHE[key] = reference_front(spec)
    return _REFERENCE_CACHE[key]


def execute(config: RunConfig, indicators: bool = False) -> list[dict]:
    """Run once and return the record lines."""
    start = time.perf_counter()
    trace = run(config, reference_for(config) if indicators else None)
    return trace_records(trace, time.perf_counter() - start)


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------


@dataclass
class SweepSpec:
    """Parameter grid of an experiment.

    Empty ``mu_values`` means the examined values for each M. In
    ``component`` mode each parameter named in ``vary`` takes its grid
    values while the others stay at their defaults (μ per M, chm, θ=5,
    T=20); ``grid`` mode takes the full cross product with every θ
    paired with pbi only.
    """

    problems: list[tuple[str, int]]
    mode: str = "component"
    vary: list[str] = field(default_factory=lambda: ["mu", "scalarizer", "theta"])
    mu_values: dict[int, list[int]] = field(default_factory=dict)
    scalarizers: list[str] = field(default_factory=lambda: ["chm", "chd", "pbi"])
    theta_values: list[float] = field(default_factory=lambda: list(THETA_GRID))
    T_values: list[int] | None = None
    runs: int = DEFAULT_RUNS
    base_seed: int = 0
    max_evals: int = 50_000
    log_interval: int = 2_000
    indicators: bool = False
    normalize: bool = True
    output: str | None = None

    def __post_init__(self):
        if self.mode not in ("component", "grid"):
            raise ValueError(f"mode must be 'component' or 'grid', got {self.mode!r}")
        self.problems = [(str(p).lower(), int(m)) for p, m in self.problems]
        self.mu_values = {int(m): [int(v) for v in vals] for m, vals in self.mu_values.items()}
        if self.T_values is None:
            self.T_values = list(T_GRID) if self.mode == "grid" else [DEFAULT_T]
        for name in ("problems", "scalarizers", "theta_values", "T_values", "vary"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"sweep grid {name!r} is empty")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        unknown = set(self.vary) - {"mu", "scalarizer", "theta", "T"}
        if unknown:
            raise ValueError(f"cannot vary {sorted(unknown)}")
        for vals in self.mu_values.values():
            if not vals:
                raise ValueError("sweep grid 'mu_values' is empty")

    @classmethod
    def from_json(cls, path) -> "SweepSpec":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: sweep spec must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"{path}: unknown sweep keys {sorted(extra)}")
        return cls(**data)

    def mus(self, n_obj: int) -> list[int]:
        if n_obj in self.mu_values:
            return self.mu_values[n_obj]
        if n_obj not in MU_GRID:
            raise ValueError(f"no default μ grid for M={n_obj}; give mu_values")
        return list(MU_GRID[n_obj])

    def scalarizer_settings(self) -> list[tuple[str, float | None]]:
        out = []
        for g in self.scalarizers:
            if g == "pbi":
                out.extend(("pbi", float(t)) for t in self.theta_values)
            else:
                out.append((g, None))
        return out

    def cells(self) -> list[dict]:
        """Configurations of the sweep, without seeds."""
        cells = []
        base = {"max_evals": self.max_evals, "log_interval": self.log_interval}
        if not self.normalize:
            base["normalize"] = False
        for name, M in self.problems:
            if self.mode == "grid":
                for mu, (g, theta), T in itertools.product(self.mus(M), self.scalarizer_settings(), self.T_values):
                    cells.append({**base, "problem": name, "n_obj": M, "mu": mu,
                                  "scalarizer": g, "theta": theta, "T": min(T, mu), "T_requested": T})
                continue
            default = {**base, "problem": name, "n_obj": M, "mu": DEFAULT_MU[M],
                       "scalarizer": "chm", "theta": None, "T": DEFAULT_T}
            seen = set()
            for param in self.vary:
                if param == "mu":
                    variants = [{"mu": mu} for mu in self.mus(M)]
                elif param == "scalarizer":
                    variants = [{"scalarizer": g, "theta": DEFAULT_THETA if g == "pbi" else None}
                                for g in self.scalarizers]
                elif param == "theta":
                    variants = [{"scalarizer": "pbi", "theta": float(t)} for t in self.theta_values]
                else:
                    variants = [{"T": T} for T in self.T_values]
                for v in variants:
                    cell = {**default, **v}
                    cell["T"] = min(cell["T"], cell["mu"])
                    key = json.dumps(cell, sort_keys=True)
                    if key not in seen:
                        seen.add(key)
                        cells.append(cell)
        for cell in cells:
            build_config(cell, 0)  # validates μ feasibility and the rest up front
        return cells


def record_path(directory, digest: str, run_index: int) -> Path:
    return Path(directory) / f"{digest}_r{run_index:03d}.jsonl"


def _task(cell, seed, indicators, path):
    lines = execute(build_config(cell, seed), indicators)
    write_jsonl(path, lines)
    return lines[-1]


def run_sweep(spec: SweepSpec, output=None, workers: int = 1) -> Path:
    """Run every missing (cell, seed) of ``spec``; return the output directory.

    Records that exist and verify are skipped. Failed runs are logged to
    ``failures.jsonl`` and the sweep continues. ``summary.csv`` lists
    each cell and run with its final HV values.
    """
    out = Path(output or spec.output or default_output_dir())
    records = out / "records"
    records.mkdir(parents=True, exist_ok=True)
    cells = spec.cells()
    tasks, planned = [], set()
    for cell in cells:
        digest = build_config(cell, 0).digest()
        for r in range(spec.runs):
            path = record_path(records, digest, r)
            if path in planned:
                continue  # cells clamped to the same effective configuration
            planned.add(path)
            if path.exists():
                try:
                    read_record(path)
                    continue
                except RecordError:
                    log.warning("re-running unverifiable record %s", path)
            tasks.append((cell, run_seed(spec.base_seed, r), spec.indicators, path))
    failures = []
    log.info("%d cells, %d runs to execute", len(cells), len(tasks))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_task, *t): t for t in tasks}
            for fut in as_completed(futures):
                t = futures[fut]
                try:
                    fut.result()
                except Exception as exc:  # recorded, sweep continues
                    failures.append({"record": str(t[3]), "cell": t[0], "seed": t[1], "error": repr(exc)})
    else:
        for t in tasks:
            try:
                _task(*t)
            except Exception as exc:
                failures.append({"record": str(t[3]), "cell": t[0], "seed": t[1], "error": repr(exc)})
    if failures:
        write_jsonl(out / "failures.jsonl", failures)
        log.error("%d runs failed; see %s", len(failures), out / "failures.jsonl")
    write_summary(out, cells, spec)
    return out


def write_summary(out: Path, cells: list[dict], spec: SweepSpec) -> None:
    rows = []
    for idx, cell in enumerate(cells):
        digest = build_config(cell, 0).digest()
        for r in range(spec.runs):
            path = record_path(out / "records", digest, r)
            status, hv_pop, hv_uea, wall = "missing", "", "", ""
            if path.exists():
                try:
                    rec = read_record(path)
                    status = "ok"
                    hv_pop = repr(float(rec.snapshots[-1]["hv_final_pop"]))
                    hv_uea = repr(float(rec.snapshots[-1]["hv_reduced_uea"]))
                    wall = f"{rec.wall_time:.3f}"
                except RecordError:
                    status = "invalid"
            rows.append([idx, digest, cell["problem"], cell["n_obj"], cell["mu"], cell["scalarizer"],
                         "" if cell.get("theta") is None else cell["theta"], cell["T"], r,
                         run_seed(spec.base_seed, r), status, hv_pop, hv_uea, wall])
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["cell", "digest", "problem", "n_obj", "mu", "scalarizer", "theta", "T", "run",
                    "seed", "status", "hv_final_pop", "hv_reduced_uea", "wall_time"])
        w.writerows(rows)


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

_INSTANCE_KEYS = ("problem", "n_obj", "k", "l")
_NON_CONFIG_KEYS = _INSTANCE_KEYS + ("pm", "b")  # dependent on the instance


def config_label(config: dict) -> str:
    """Instance-independent label of a configuration."""
    g = config["scalarizer"]
    g = f"pbi({config['theta']:g})" if g == "pbi" else g
    return f"mu={config['mu']} g={g} T={config['T']}"


def group_records(records: list[RunRecord]) -> dict:
    """{digest: [records sorted by seed]} with per-digest snapshot schedules checked."""
    groups: dict[str, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault(rec.digest, []).append(rec)
    for digest, recs in groups.items():
        recs.sort(key=lambda r: r.seed)
        counts = recs[0].eval_counts
        for r in recs[1:]:
            if r.eval_counts != counts:
                raise RecordError(f"config {digest}: runs disagree on snapshot schedule")
    return groups


def median_curves(records: list[RunRecord]) -> list[list]:
    rows = []
    for digest, recs in group_records(records).items():
        cfg = recs[0].config
        for scen in SCENARIOS:
            S = np.array([r.series(scen) for r in recs])
            q25, med, q75 = np.percentile(S, [25, 50, 75], axis=0)
            for t, ev in enumerate(recs[0].eval_counts):
                rows.append([cfg["problem"], cfg["n_obj"], config_label(cfg), digest, scen, ev,
                             len(recs), med[t], q25[t], q75[t]])
    return [["problem", "n_obj", "config", "digest", "scenario", "eval_count", "runs",
             "median", "q25", "q75"]] + rows


def end_table(records: list[RunRecord]) -> list[list]:
    rows = []
    for digest, recs in group_records(records).items():
        cfg = recs[0].config
        theta = "" if cfg["theta"] is None else cfg["theta"]
        for scen in SCENARIOS:
            final = [r.series(scen)[-1] for r in recs]
            rows.append([cfg["problem"], cfg["n_obj"], cfg["mu"], cfg["scalarizer"], theta, cfg["T"],
                         scen, recs[0].eval_counts[-1], len(recs), float(np.median(final))])
    return [["problem", "n_obj", "mu", "scalarizer", "theta", "T", "scenario", "eval_count",
             "runs", "median_hv"]] + rows


def aps_curves(records: list[RunRecord], alpha: float = ALPHA) -> list[list]:
    """Anytime APS per configuration and scenario, over the instances of each M.

    Within one M every instance must hold the same configuration set and
    the same snapshot schedule.
    """
    groups = group_records(records)
    by_instance: dict[tuple, dict[str, list[RunRecord]]] = {}
    for recs in groups.values():
        cfg = recs[0].config
        inst = tuple(cfg[k] for k in _INSTANCE_KEYS)
        label = config_label(cfg)
        if label in by_instance.setdefault(inst, {}):
            raise RecordError(f"two configurations share the label {label!r} on {inst}")
        by_instance[inst][label] = recs
    rows = [["n_obj", "eval_count", "scenario", "config", "aps"]]
    for M in sorted({inst[1] for inst in by_instance}):
        insts = [cfgs for inst, cfgs in by_instance.items() if inst[1] == M]
        labels = sorted(insts[0])
        schedule = next(iter(insts[0].values()))[0].eval_counts
        for cfgs in insts:
            if sorted(cfgs) != labels:
                raise RecordError(f"M={M}: instances hold different configuration sets")
            if any(recs[0].eval_counts != schedule for recs in cfgs.values()):
                raise RecordError(f"M={M}: records mix different snapshot schedules")
        for scen in SCENARIOS:
            for t, ev in enumerate(schedule):
                P = [
                    performance_scores([[r.series(scen)[t] for r in cfgs[lab]] for lab in labels], alpha)
                    for cfgs in insts
                ]
                rows.extend([M, ev, scen, lab, float(v)] for lab, v in zip(labels, aps(P)))
    return rows


def empirical_front(records: list[RunRecord]) -> list[list]:
    """Nondominated union of every stored front of one problem instance.

    This stands in for a reference front where none is known in closed
    form (WFG1-3); the CSV is accepted by ``indicators --reference``.
    """
    instances = {(r.config["problem"], r.config["n_obj"]) for r in records}
    if len(instances) != 1:
        raise RecordError(f"empirical front needs records of one instance, got {sorted(instances)}")
    (_, M), = instances
    pts = []
    for rec in records:
        pts.extend(rec.summary["final_pop_front"])
        pts.extend(rec.summary["reduced_uea_front"])
    front = nondominated_unique(np.asarray(pts, dtype=float).reshape(-1, M))
    return [[f"f{i + 1}" for i in range(M)]] + [[repr(float(v)) for v in row] for row in front]


REPORTS = {
    "aps": aps_curves,
    "median-curve": median_curves,
    "table": end_table,
    "empirical-front": empirical_front,
}


def write_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)


# --------------------------------------------------------------------------
# CSV point sets
# --------------------------------------------------------------------------


def read_points_csv(path) -> np.ndarray:
    """Numeric rows of a CSV file; an optional non-numeric first row is a header.

    Raises ValueError naming the line of the first malformed row.
    """
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: non-numeric value in row {row!r}") from None
            if not all(np.isfinite(vals)):
                raise ValueError(f"{path}:{lineno}: non-finite value")
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.array(rows)


def default_b(n_obj: int) -> int:
    if n_obj not in DEFAULT_B:
        raise ValueError(f"no default b for M={n_obj}; pass b explicitly")
    return DEFAULT_B[n_obj]
