# %% [markdown]
# # Quality indicators
#
# HV is exact and normalized: objectives are scaled by the ideal and
# nadir, the reference point is (1.1, ..., 1.1) and the volume is
# divided by 1.1^M. GD, IGD and MS work on the same normalized scale.

# %%
import numpy as np

from moead_uea import gd, hypervolume, igd, ms

ideal, nadir = np.zeros(2), np.ones(2)
print(hypervolume([[0.25, 0.75], [0.75, 0.25]], ideal, nadir))  # (0.2975 + 0.2975 - 0.1225) / 1.21

# %% [markdown]
# Spreading the same number of points more evenly over the front pays
# off in IGD but not in GD, which only checks convergence.

# %%
ref = np.c_[np.cos(np.linspace(0, np.pi / 2, 500)), np.sin(np.linspace(0, np.pi / 2, 500))]
even = ref[::50]
clumped = ref[:10]
for name, A in (("even", even), ("clumped", clumped)):
    print(f"{name:8s} HV={hypervolume(A, ideal, nadir):.4f} GD={gd(A, ref):.4f} "
          f"IGD={igd(A, ref):.4f} MS={ms(A):.4f}")
