# %% [markdown]
# # Archive maintenance and reduction
#
# The archive keeps every nondominated objective vector seen so far.
# Reduction picks b of them: first the per-objective minimizers, then
# repeatedly the point farthest from the points already chosen.

# %%
import numpy as np

from moead_uea import Archive, reduce

rng = np.random.default_rng(3)
theta = rng.random(3000) * np.pi / 2
r = 1.0 + 0.2 * rng.random(3000)  # noisy quarter circle
F = np.c_[r * np.cos(theta), r * np.sin(theta)]

arch = Archive(2, 0)
for i, f in enumerate(F):
    arch.add(f, None, i)
print(len(F), "offered ->", len(arch), "kept")

# %%
picked = reduce(arch, 10, ideal=np.zeros(2), nadir=np.ones(2))
for s in picked:
    print(s.f.round(3), "from evaluation", s.eval_index)

# %% [markdown]
# The first two picks are the minimizers of f1 and f2; the rest fill
# the largest gaps.
