# %% [markdown]
# # Rank-sum tests and average performance scores
#
# For each pair of configurations a one-sided Wilcoxon rank-sum test
# asks whether one has significantly larger HV. A configuration's score
# on an instance counts the rivals that beat it; APS averages the
# scores over instances, so lower is better.

# %%
import numpy as np

from moead_uea.stats import stats_report, wilcoxon_rank_sum

rng = np.random.default_rng(5)
print("p(y > x):", wilcoxon_rank_sum(rng.normal(0, 1, 31), rng.normal(1, 1, 31)))

# %%
configs = ["A", "B", "C"]
instances = []
for shift in (0.0, 0.3, 0.6):  # three instances with the same ordering A < B < C
    instances.append([rng.normal(mu + shift, 0.05, 31) for mu in (0.5, 0.6, 0.7)])
rep = stats_report(instances)
print("P per instance:\n", rep.P)
print("APS:", dict(zip(configs, rep.aps.tolist())))
