# %% [markdown]
# # Orders on density matrices
#
# The maximum-eigenvalue order on density matrices, its behaviour under
# tensor products and the domain-theoretic probes.

# %%
import numpy as np

from infoorder import density as dc
from infoorder.density_orders import comparable_pair, composition_suite, leq_plus_density
from infoorder.domain import dcpo_max_counterexample, way_below_probe
from infoorder.entailment import max_grade

rng = np.random.default_rng(0)

# %% [markdown]
# ## A comparable pair and its spectra

# %%
rho, pi = comparable_pair("dplus", rng, 3)
print("rho eigenvalues", np.round(rho.eig.eigenvalues, 4))
print("pi  eigenvalues", np.round(pi.eig.eigenvalues, 4))
print("rho <= pi:", leq_plus_density(rho, pi), " pi <= rho:", leq_plus_density(pi, rho))

# %% [markdown]
# ## Tensor products preserve comparability

# %%
print(composition_suite("dplus", 2, 2, 300, 1).summary())

# %% [markdown]
# ## Graded Löwner order
#
# The largest ``k`` with ``pi - k rho >= 0`` multiplies under tensor products.

# %%
r1, p1, r2, p2 = (dc.random_density(rng, 2) for _ in range(4))
print(max_grade(r1, p1) * max_grade(r2, p2), max_grade(dc.tensor(r1, r2), dc.tensor(p1, p2)))

# %% [markdown]
# ## Way-below probes
#
# Mixtures towards the maximally mixed state are approximations; no chain
# in the sampled families refutes it.

# %%
x = dc.DensityOperator._trusted(0.5 * dc.bottom_density(3).matrix + 0.5 * pi.matrix)
print(way_below_probe("dplus", x, pi, 200, 0).to_dict())

# %% [markdown]
# ## The maximal restricted order has a chain without a join

# %%
r = dcpo_max_counterexample()
print({k: r[k] for k in ("no_join", "bounds_are_upper_bounds", "bottom2_is_upper_bound")})
