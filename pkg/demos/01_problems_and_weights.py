# %% [markdown]
# # Benchmark problems and weight vectors
#
# MOEA/D decomposes an M-objective problem into μ scalar subproblems,
# one per weight vector of a simplex lattice. This script builds a WFG4
# instance, evaluates a few random points and looks at the lattice
# behind the default population sizes.

# %%
import numpy as np

from moead_uea import build_neighborhood, das_dennis, get_problem, reference_front, resolution_for_mu
from moead_uea.weights import InfeasiblePopulationSize

spec = get_problem("wfg4", 3)
print(spec.name, "M =", spec.n_obj, "D =", spec.n_var, "k =", spec.k, "l =", spec.l)
print("upper bounds:", spec.upper[:5], "...")
print("nadir used for normalization:", spec.nadir)

# %% [markdown]
# Objective vectors of uniformly random decision vectors sit well
# behind the front.

# %%
rng = np.random.default_rng(0)
X = spec.lower + rng.random((5, spec.n_var)) * (spec.upper - spec.lower)
print(spec.objective(X))

# %% [markdown]
# WFG4 has a concave front: scaled points of the positive unit sphere.

# %%
R = reference_front(spec)
scaled = R / spec.nadir
print(len(R), "reference points; radius range", np.linalg.norm(scaled, axis=1).min(), np.linalg.norm(scaled, axis=1).max())

# %% [markdown]
# ## Simplex lattice
#
# μ must be a lattice size C(H + M - 1, M - 1). Other sizes are
# rejected with the nearest achievable ones.

# %%
H = resolution_for_mu(3, 210)
ws = das_dennis(3, H)
print("H =", H, "vectors:", len(ws), "first three:", ws.vectors[:3].tolist())
try:
    resolution_for_mu(3, 100)
except InfeasiblePopulationSize as exc:
    print(exc)

# %%
nb = build_neighborhood(ws, 20)
print("neighbors of subproblem 0:", nb.table[0][:8], "...")
