"""Command-line interface: ``moead-uea {run,sweep,report,reduce,indicators}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness
from .archive import reduce_indices
from .engine import DEFAULT_MU, RunConfig
from .indicators import report
from .problems import ANALYTIC_FRONT, PROBLEM_NAMES, ProblemError, get_problem, reference_front
from .scalarize import SCALARIZERS, Scalarizer
from .weights import InfeasiblePopulationSize, resolution_for_mu


class FlagError(Exception):
    """A flag value is invalid; the message names the flag."""


def _flag(name, exc):
    return FlagError(f"{name}: {exc}")


def _problem(args):
    try:
        return get_problem(args.problem, args.objectives, args.k, args.l)
    except ProblemError as exc:
        raise _flag("--problem", exc) from None


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _probability(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return v


def _add_problem_flags(p, required=True):
    p.add_argument("--problem", required=required, type=str.lower, choices=PROBLEM_NAMES)
    p.add_argument("--objectives", "-M", required=required, type=int, help="number of objectives")
    p.add_argument("--k", type=int, default=None, help="position-parameter count (default per problem)")
    p.add_argument("--l", type=int, default=None, help="WFG distance-parameter count (default 20)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moead-uea", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute one MOEA/D run and write a JSONL record")
    _add_problem_flags(p)
    p.add_argument("--mu", type=_positive_int, default=None, help="population size (default per M)")
    p.add_argument("--scalarizer", choices=SCALARIZERS, default="chm")
    p.add_argument("--theta", type=float, default=None, help="PBI penalty (default 5)")
    p.add_argument("--T", type=_positive_int, default=20, help="neighborhood size")
    p.add_argument("--max-evals", type=_positive_int, default=50_000)
    p.add_argument("--log-interval", type=_positive_int, default=2_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pc", type=_probability, default=1.0)
    p.add_argument("--eta-c", type=float, default=20.0)
    p.add_argument("--pm", type=_probability, default=None, help="mutation probability (default 1/D)")
    p.add_argument("--eta-m", type=float, default=20.0)
    p.add_argument("--b", type=_positive_int, default=None, help="reduced archive size (default per M)")
    p.add_argument("--indicators", action="store_true", help="also log GD/IGD/MS against the analytic front")
    p.add_argument("--no-normalize", dest="normalize", action="store_false",
                   help="scalarize raw f - z instead of population-range normalized objectives")
    p.add_argument("--output", "-o", type=Path, default=None, help="JSONL path (default under $%s)" % harness.OUTPUT_ENV)

    p = sub.add_parser("sweep", help="run a parameter sweep described by a JSON file")
    p.add_argument("spec", type=Path)
    p.add_argument("--output", "-o", type=Path, default=None)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--dry-run", action="store_true", help="only print the number of cells and runs")

    p = sub.add_parser("report", help="aggregate run records into CSV")
    p.add_argument("records", type=Path, help="directory of JSONL records")
    p.add_argument("--mode", choices=sorted(harness.REPORTS), default="aps")
    p.add_argument("--output", "-o", type=Path, default=None, help="CSV path (default stdout)")

    p = sub.add_parser("reduce", help="select b objective vectors from an archive CSV")
    p.add_argument("archive_csv", type=Path, help="objective vectors, one per row")
    _add_problem_flags(p, required=False)
    p.add_argument("--b", type=_positive_int, default=None)
    p.add_argument("--output", "-o", type=Path, default=None)

    p = sub.add_parser("indicators", help="HV (and GD/IGD/MS when a front is known) of a point CSV")
    p.add_argument("points_csv", type=Path)
    _add_problem_flags(p, required=False)
    p.add_argument("--reference", type=Path, default=None, help="reference front CSV (default analytic)")
    return parser


def cmd_run(args) -> int:
    spec = _problem(args)
    M = spec.n_obj
    mu = args.mu if args.mu is not None else DEFAULT_MU.get(M)
    if mu is None:
        raise FlagError(f"--mu: no default population size for M={M}")
    try:
        resolution_for_mu(M, mu)
    except InfeasiblePopulationSize as exc:
        raise _flag("--mu", exc) from None
    if args.theta is not None and args.scalarizer != "pbi":
        raise FlagError("--theta: only valid with --scalarizer pbi")
    try:
        scal = Scalarizer(args.scalarizer, args.theta)
    except ValueError as exc:
        raise _flag("--theta", exc) from None
    if args.T > mu:
        raise FlagError(f"--T: neighborhood size {args.T} exceeds population size {mu}")
    if args.max_evals < mu:
        raise FlagError(f"--max-evals: budget {args.max_evals} is smaller than the population size {mu}")
    if args.indicators and spec.name not in ANALYTIC_FRONT:
        raise FlagError(f"--indicators: no analytic reference front for {spec.name}")
    config = RunConfig(
        problem=spec, mu=mu, scalarizer=scal, T=args.T, max_evals=args.max_evals, seed=args.seed,
        log_interval=args.log_interval, pc=args.pc, eta_c=args.eta_c, pm=args.pm, eta_m=args.eta_m, b=args.b,
        normalize=args.normalize,
    )
    lines = harness.execute(config, args.indicators)
    out = args.output or harness.default_output_dir() / f"{spec.label}_{config.digest()}_s{args.seed}.jsonl"
    harness.write_jsonl(out, lines)
    last = lines[-2]
    print(f"{out}: {len(lines) - 1} snapshots, hv_final_pop={last['hv_final_pop']:.6f} "
          f"hv_reduced_uea={last['hv_reduced_uea']:.6f}")
    return 0


def cmd_sweep(args) -> int:
    try:
        spec = harness.SweepSpec.from_json(args.spec)
        cells = spec.cells()
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise FlagError(f"spec: {exc}") from None
    if args.dry_run:
        print(f"{len(cells)} cells x {spec.runs} runs = {len(cells) * spec.runs} runs")
        return 0
    out = harness.run_sweep(spec, args.output, args.workers)
    failed = (out / "failures.jsonl").exists()
    print(f"{out}: {len(cells)} cells, summary at {out / 'summary.csv'}")
    return 1 if failed else 0


def cmd_report(args) -> int:
    directory = args.records / "records" if (args.records / "records").is_dir() else args.records
    rows = harness.REPORTS[args.mode](harness.load_records(directory))
    if args.output:
        harness.write_csv(args.output, rows)
    else:
        import csv

        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
    return 0


def _ideal_nadir(args, F):
    M = F.shape[1]
    if args.problem is None:
        # no problem bounds: normalize by the data's own range
        return F.min(axis=0), F.max(axis=0)
    if args.objectives is None:
        args.objectives = M
    if args.objectives != M:
        raise FlagError(f"--objectives: file has {M} objectives, flag says {args.objectives}")
    spec = _problem(args)
    return spec.ideal, spec.nadir


def cmd_reduce(args) -> int:
    F = harness.read_points_csv(args.archive_csv)
    M = F.shape[1]
    ideal, nadir = _ideal_nadir(args, F)
    b = args.b if args.b is not None else harness.default_b(M)
    idx = reduce_indices(F, b, ideal, nadir)
    rows = [[f"f{i + 1}" for i in range(M)]] + [[repr(float(v)) for v in F[i]] for i in idx]
    if args.output:
        harness.write_csv(args.output, rows)
    else:
        import csv

        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
    return 0


def cmd_indicators(args) -> int:
    P = harness.read_points_csv(args.points_csv)
    M = P.shape[1]
    if args.problem is None:
        raise FlagError("--problem: needed for normalization bounds")
    ideal, nadir = _ideal_nadir(args, P)
    ref = None
    if args.reference is not None:
        ref = harness.read_points_csv(args.reference)
    elif args.problem in ANALYTIC_FRONT:
        ref = reference_front(_problem(args))
    rep = report(P, ideal, nadir, ref)
    print(json.dumps({k: v for k, v in vars(rep).items() if v is not None}, sort_keys=True))
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "reduce": cmd_reduce,
    "indicators": cmd_indicators,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (harness.RecordError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
