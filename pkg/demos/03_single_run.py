# %% [markdown]
# # One MOEA/D run under both scenarios
#
# Every evaluated solution goes into an unbounded archive. At each
# snapshot the same run state gives two views: the nondominated part of
# the population and b solutions selected from the archive.

# %%
import numpy as np

from moead_uea import RunConfig, Scalarizer, get_problem, replacement_count, run

cfg = RunConfig(problem=get_problem("wfg4", 3), mu=28, scalarizer=Scalarizer("chm"), seed=1)
trace = run(cfg)

print(f"{'evals':>6} {'archive':>8} {'HV pop':>8} {'HV UEA':>8}")
for s in trace.snapshots[::4]:  # every 8,000 evaluations, ending at 50,000
    print(f"{s.eval_count:6d} {s.archive_size:8d} {s.hv_final_pop:8.4f} {s.hv_reduced_uea:8.4f}")

# %% [markdown]
# A population of 28 can hold at most 28 distinct solutions, while the
# reduced archive offers 210 well-spread ones.

# %%
last = trace.snapshots[-1]
print("final population front:", len(last.pop_front), "points; reduced archive:", len(last.uea_front))
reps = replacement_count(trace)
print("replacements per generation: first", reps[:5], "last", reps[-5:])
assert trace.evaluations == 50_000 and len(trace.snapshots) == 25
