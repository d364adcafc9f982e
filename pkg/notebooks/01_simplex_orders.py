# %% [markdown]
# # Information orders on the simplex
#
# Compare distributions under the restricted orders and the renormalised
# Löwner orders, check the axioms on samples and draw an upperset.

# %%
import numpy as np

from infoorder import OrderSpec, compare, order_property_suite
from infoorder.cli import barycentric_grid, classify_grid, ternary_svg
from infoorder.measurements import monotonicity_report

# %% [markdown]
# ## Two orders that disagree
#
# On this pair the two renormalised Löwner orders give opposite verdicts,
# while the Bayesian order cannot compare the points at all.

# %%
x, y = (0.6, 0.2, 0.2), (0.5, 1 / 3, 1 / 6)
for name in ("lplus", "lminus", "bayesian", "max", "major"):
    print(f"{name:9s} {compare(OrderSpec(name), x, y).value}")

# %% [markdown]
# ## Axioms on samples
#
# Majorization is only a preorder, so antisymmetry and maximality of pure
# states are expected to fail for it.

# %%
for name in ("bayesian", "major"):
    print(order_property_suite(OrderSpec(name), 3, 2000, 0).summary())

# %% [markdown]
# ## Entropy is not monotone for the maximal restricted order

# %%
report = monotonicity_report("entropy", OrderSpec("max"), 3, 5000, 1)
w = report["strict_monotone"].first_counterexample
print("x =", np.round(w["x"], 4), "H =", round(w["mu_x"], 4))
print("y =", np.round(w["y"], 4), "H =", round(w["mu_y"], 4))

# %% [markdown]
# ## Upperset and downset of a point
#
# Red points lie above ``(15, 10, 5) / 30``, blue points below.

# %%
grid = barycentric_grid(40)
relations = classify_grid(OrderSpec("bayesian"), np.array([15, 10, 5]) / 30, grid)
print({r: relations.count(r) for r in ("up", "down", "eq", "none")})
with open("bayesian_upperset.svg", "w", encoding="utf-8") as fh:
    fh.write(ternary_svg(grid, relations))
