"""
The symmetric map and its exact certificates
=============================================

Build the map on P^1 and P^2, check it commutes with the symmetric group,
and factor its Jacobian determinant over the transposition hyperplanes.
"""

# %%
from equidyn import build_equivariant_map, generate_group, check_equivariance
from equidyn.dynamics import verify_critical_factorization
from equidyn.polynomial import jacobian_det_poly

g1 = build_equivariant_map(1)
print("k=1:", [str(c) for c in g1.components])

g2 = build_equivariant_map(2)
print("k=2, degree", g2.degree)
print(g2.components[0])

# %%
# every element of the group, exactly
for k, g in ((1, g1), (2, g2)):
    group = generate_group(k)
    ok = all(check_equivariance(g, r).ok for r in group)
    print(f"k={k}: {len(group)} elements, equivariant: {ok}")

# %%
# det Dg = c * product of squared hyperplane forms
print(jacobian_det_poly(g1))
for k, g in ((1, g1), (2, g2)):
    res = verify_critical_factorization(g)
    print(f"k={k}: constant {res.constant}, degree check {res.degree_check}")
