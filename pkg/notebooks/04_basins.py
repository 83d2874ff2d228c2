"""
Basins of attraction
====================

Monte Carlo survey of Fubini-Study random points, and a picture of the
basins on a complex line.
"""

# %%
from equidyn import basin_survey, build_equivariant_map, render_slice

for k, n in ((1, 20_000), (2, 5_000)):
    rep = basin_survey(build_equivariant_map(k), n, seed=1)
    print(f"k={k}: resolved {rep.resolved_fraction:.4f}")
    for p, c in zip(rep.attractors, rep.per_attractor_counts):
        print("   ", p, c)

# %%
# the three basins of the P^1 map in the chart t -> [1 : t]
img = render_slice(build_equivariant_map(1), window=(-2, 2, -2, 2), width=200, height=200)
img.write_ppm("basins_k1.ppm")

# %%
# the default k=2 slice through [1:0:0] and [0:1:1]
img = render_slice(build_equivariant_map(2), width=200, height=200)
img.write_ppm("basins_k2.ppm")
