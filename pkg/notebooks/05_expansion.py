"""
Expansion away from the critical set
====================================

Uniform random starts almost all fall into a basin, which sits on the
critical set.  Backward orbits accumulate on the Julia set instead, and
along them the chart derivative grows exponentially.
"""

# %%
import math

import numpy as np

from equidyn import build_equivariant_map, expansion_probe, seeded_growth

g = build_equivariant_map(1)
for sampler in ("uniform", "backward"):
    res = expansion_probe(g, 500, seed=0, n_steps=40, delta=0.05, sampler=sampler)
    print(sampler, res.surviving_orbits, res.summary())

# %%
# along the repelling fixed point the exponent is log 2
omega = (1 + 1j * math.sqrt(3)) / 2
growth, _ = seeded_growth(g, np.array([[omega, 1]]), 40, period=1)
print(growth[0], math.log(2))

# %%
# a free float orbit drifts off the fixed point: roundoff grows like 2^n
growth, _ = seeded_growth(g, np.array([[omega, 1]]), 40)
print(growth[0] - math.log(2))
