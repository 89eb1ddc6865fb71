# %% [markdown]
# # Sweeps and reports
#
# A sweep runs every configuration for a number of seeds and writes one
# JSONL record per run. Records are named by config digest and run
# index, so rerunning a sweep skips finished runs. Reports read the
# records back and emit plot-ready CSV. The command-line equivalent is
#
#     moead-uea sweep spec.json -o out
#     moead-uea report out --mode aps

# %%
import tempfile
from pathlib import Path

from moead_uea import harness

spec = harness.SweepSpec(problems=[["dtlz2", 3], ["wfg4", 3]], vary=["mu"], mu_values={3: [28, 210]},
                         runs=5, max_evals=6000, log_interval=2000)
out = harness.run_sweep(spec, Path(tempfile.mkdtemp()))
print(sorted(p.name for p in (out / "records").iterdir())[:3], "...")
records = harness.load_records(out / "records")

# %%
for row in harness.end_table(records):
    print(row)

# %%
for row in harness.aps_curves(records):
    print(row)
