"""
equidyn
=======

Symmetric critically finite holomorphic maps on complex projective space.

For each k >= 1 the package builds the degree-(k+3) map on P^k that commutes
with the action of the symmetric group S_{k+2}, certifies its algebraic
structure in exact rational arithmetic, and probes its dynamics numerically.

Modules
-------
polynomial
    Exact homogeneous polynomials, polynomial maps, the map builder,
    Jacobians and division by linear forms.
projective
    Projective points (exact or float), canonical forms, chordal distance,
    map evaluation.
symmetry
    Group generators and closure, transposition hyperplanes, flats,
    equivariance certificates, superattractor enumeration.
dynamics
    Invariance / critical-set / superattraction certificates, restriction
    to flats, orbits, fixed points on P^1.
basins
    Monte Carlo basin survey and the expansion probe.
render
    Basin pictures on complex lines, PPM output.
cli
    The ``equidyn`` command.
"""

from .basins import (
    BasinLabel,
    BasinReport,
    ExpansionProbeResult,
    basin_survey,
    classify_basin,
    expansion_probe,
    seeded_growth,
)
from .dynamics import (
    OrbitRecord,
    critical_structure,
    find_fixed_points_dim1,
    iterate,
    restrict_map,
    verify_critical_factorization,
    verify_invariant_hyperplane,
    verify_superattracting,
)
from .polynomial import (
    HomogeneousPolynomial,
    PolynomialMap,
    build_equivariant_map,
    elementary_symmetric_all,
    jacobian_det_poly,
    jacobian_matrix,
    poly_compose_linear,
    poly_divide_exact,
)
from .projective import ProjectivePoint, chordal_distance, evaluate_map
from .render import ImageBuffer, render_slice
from .symmetry import (
    Flat,
    GroupElement,
    Hyperplane,
    check_equivariance,
    enumerate_superattractors,
    flat_from_hyperplanes,
    generate_group,
    generators,
    hyperplane_arrangement,
    pointwise_fixed_hyperplane,
    t_matrix,
)

__all__ = [
    "BasinLabel",
    "BasinReport",
    "ExpansionProbeResult",
    "Flat",
    "GroupElement",
    "HomogeneousPolynomial",
    "Hyperplane",
    "ImageBuffer",
    "OrbitRecord",
    "PolynomialMap",
    "ProjectivePoint",
    "basin_survey",
    "build_equivariant_map",
    "check_equivariance",
    "chordal_distance",
    "classify_basin",
    "critical_structure",
    "elementary_symmetric_all",
    "enumerate_superattractors",
    "evaluate_map",
    "expansion_probe",
    "find_fixed_points_dim1",
    "flat_from_hyperplanes",
    "generate_group",
    "generators",
    "hyperplane_arrangement",
    "iterate",
    "jacobian_det_poly",
    "jacobian_matrix",
    "pointwise_fixed_hyperplane",
    "poly_compose_linear",
    "poly_divide_exact",
    "render_slice",
    "restrict_map",
    "seeded_growth",
    "t_matrix",
    "verify_critical_factorization",
    "verify_invariant_hyperplane",
    "verify_superattracting",
]

__version__ = "0.1.0"
