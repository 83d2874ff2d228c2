"""
Superattracting points and invariant flats
==========================================

The 0/1 points are exactly the points of the intersection lattice of the
arrangement; each is a fixed point with zero derivative.  Restricting to
a line gives a map of P^1 whose critical points are again lattice points.
"""

# %%
from equidyn import build_equivariant_map, enumerate_superattractors, flat_from_hyperplanes
from equidyn.dynamics import critical_points_on_line, restrict_map, verify_superattracting
from equidyn.symmetry import Hyperplane, all_flats

g = build_equivariant_map(2)
for p in enumerate_superattractors(2):
    print(p, verify_superattracting(g, p).ok)

# %%
# dimension counts of the intersection lattice for k = 2
flats = all_flats(2)
print({m: sum(f.m == m for f in flats) for m in range(3)})

# %%
line = flat_from_hyperplanes([Hyperplane.coord(1, 2)])
r = restrict_map(g, line)
print("restricted map, degree", r.degree)
print([str(c) for c in r.map.components])
print("critical points:", critical_points_on_line(r))

# degree 5 on a line, not the degree-4 map of P^1
print("degree differs from m + 3:", r.degree != line.m + 3)
