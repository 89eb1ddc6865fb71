# %% [markdown]
# # Scalarizing functions
#
# The three scalarizers rank the same candidates differently. Here one
# weight vector scores points along the quarter circle, which shows
# where each function places its optimum.

# %%
import numpy as np

from moead_uea import Scalarizer

t = np.linspace(0.0, np.pi / 2, 181)
arc = np.c_[np.cos(t), np.sin(t)]
w = np.array([0.7, 0.3])
z = np.zeros(2)

for s in (Scalarizer("chm"), Scalarizer("chd"), Scalarizer("pbi", 0.1), Scalarizer("pbi", 5.0)):
    g = s(arc, np.broadcast_to(w, arc.shape), z)
    best = arc[np.argmin(g)]
    print(f"{s.label:9s} optimum at angle {np.degrees(t[np.argmin(g)]):5.1f} deg, f = {best.round(3)}")

# %% [markdown]
# The two Chebyshev forms place the optimum on different rays: chm
# (max of w_i f_i) where w_i f_i are equal, so along 1/w at about 67
# degrees, and chd (max of f_i / w_i) along w itself at about 23
# degrees. PBI with a large θ also follows w. With a tiny θ the
# perpendicular penalty barely matters and PBI acts like a weighted
# sum, whose optimum on a concave front sits at an end point. That is
# why θ = 0.1 populations on concave problems gather at the extremes.
