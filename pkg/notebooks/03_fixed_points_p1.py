"""
Fixed points on the Riemann sphere
==================================

Five fixed points: three superattracting (0, 1, infinity) and a pair of
repelling ones with multiplier 2.
"""

# %%
import math

import numpy as np

from equidyn import build_equivariant_map, find_fixed_points_dim1

g = build_equivariant_map(1)
for fp in find_fixed_points_dim1(g):
    print(fp.point, "multiplier", np.round(fp.multiplier, 12))

# %%
omega = (1 + 1j * math.sqrt(3)) / 2
print("expected repelling point", omega)
