"""MOEA/D with an unbounded external archive, benchmark problems,
indicators and the statistics used to compare parameter settings under
the final-population and reduced-archive scenarios."""

from .archive import Archive, ReductionConfig, Solution, dominates, reduce
from .engine import DEFAULT_MU, RunConfig, RunTrace, replacement_count, run
from .indicators import gd, hypervolume, igd, ms
from .problems import ProblemSpec, evaluate, get_problem, reference_front
from .scalarize import Scalarizer, g_chd, g_chm, g_pbi
from .weights import build_neighborhood, das_dennis, resolution_for_mu

__version__ = "0.1.0"
