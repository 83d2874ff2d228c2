"""Exact structural checks, restrictions to flats, orbits and fixed points.

The exact checks certify, for a given map, that every transposition
hyperplane is invariant, that the Jacobian determinant is (constant) times
the product of the squared hyperplane forms, and that each 0/1 point is a
fixed point with vanishing derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    InvarianceViolationError,
    NotDivisibleError,
    NumericOverflowError,
    RootSolverError,
)
from .polynomial import (
    MAX_EXACT_DET_K,
    HomogeneousPolynomial,
    PolynomialMap,
    _norm,
    determinant,
    divide_by_linear,
    jacobian_det_poly,
    jacobian_matrix,
    multiplicity,
)
from .projective import (
    PROJ_EQ_TOL,
    ProjectivePoint,
    canonicalize,
    chordal,
    evaluate_points,
    leading_index,
    projectively_equal_exact,
)
from .symmetry import Flat, Hyperplane, enumerate_superattractors, hyperplane_arrangement


# -- exact certificates ------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Outcome of one exact check.  ``detail`` carries the certificate or witness."""

    name: str
    ok: bool
    detail: dict = field(default_factory=dict)


def verify_invariant_hyperplane(pmap: PolynomialMap, h: Hyperplane) -> Certificate:
    """``h`` is invariant iff ``covector · g`` is divisible by the form of ``h``."""
    return verify_invariant_form(pmap, h.covector, f"invariant {h}")


def verify_invariant_form(pmap: PolynomialMap, covector, name: str | None = None) -> Certificate:
    """Invariance of the hyperplane ``{covector · x = 0}`` by exact division."""
    pulled = HomogeneousPolynomial.zero(pmap.n_vars, pmap.degree)
    for a, comp in zip(covector, pmap.components):
        if a:
            pulled = pulled + comp.scale(a)
    name = name or f"invariant {HomogeneousPolynomial.linear(covector)} = 0"
    try:
        q = divide_by_linear(pulled, HomogeneousPolynomial.linear(covector))
    except NotDivisibleError as exc:
        return Certificate(name, False, {"remainder": str(exc.remainder)})
    return Certificate(name, True, {"quotient_degree": q.degree})


@dataclass(frozen=True)
class CriticalFactorization:
    ok: bool
    constant: Fraction | None
    degree_check: bool
    method: str  # "exact" or "numeric"
    exponents: dict = field(default_factory=dict)  # hyperplane label -> fitted exponent
    witness: str | None = None


def verify_critical_factorization(
    pmap: PolynomialMap,
    arrangement: Sequence[Hyperplane] | None = None,
    seed: int = 0,
) -> CriticalFactorization:
    """Check ``det Dg = c · prod_h l_h^2`` with a nonzero constant ``c``.

    Exact for k <= 3.  Beyond that, fits the vanishing order of ``det Dg``
    transversally to each hyperplane at 20 random points; each fitted
    exponent must land in [1.9, 2.1].
    """
    k = pmap.k
    if arrangement is None:
        arrangement = hyperplane_arrangement(k)
    degree_check = (k + 1) * (pmap.degree - 1) == 2 * len(arrangement)
    if k > MAX_EXACT_DET_K:
        return _numeric_critical_orders(pmap, arrangement, degree_check, seed)
    det = jacobian_det_poly(pmap)
    q = det
    for h in arrangement:
        ell = h.linear_form()
        for _ in range(2):
            try:
                q = divide_by_linear(q, ell)
            except NotDivisibleError:
                return CriticalFactorization(False, None, degree_check, "exact", witness=f"not divisible by {h}^2")
    if q.is_zero() or q.degree != 0:
        return CriticalFactorization(False, None, degree_check, "exact", witness=f"quotient {q}")
    c = q.constant_value()
    return CriticalFactorization(bool(degree_check), c, degree_check, "exact")


def _numeric_critical_orders(pmap, arrangement, degree_check, seed, n_points=20):
    rng = np.random.default_rng([seed, pmap.k])
    num = pmap.numeric
    n = pmap.n_vars
    eps = np.geomspace(1e-3, 1e-5, 5)
    exponents = {}
    ok = bool(degree_check)
    for h in arrangement:
        c = np.array(h.covector, dtype=float)
        fits = []
        for _ in range(n_points):
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            z -= c * (c @ z) / (c @ c)  # project onto the hyperplane
            z /= np.linalg.norm(z)
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            pts = z[None, :] + eps[:, None] * v[None, :]
            dets = np.abs(np.linalg.det(num.jacobian(pts)))
            slope = np.polyfit(np.log(eps), np.log(dets), 1)[0]
            fits.append(slope)
        exponents[h.label()] = float(np.min(fits)), float(np.max(fits))
        ok &= all(1.9 <= s <= 2.1 for s in fits)
    return CriticalFactorization(ok, None, degree_check, "numeric", exponents=exponents)


def chart_derivative_exact(pmap: PolynomialMap, point: Sequence, chart: int, image_chart: int):
    """Exact derivative of ``pmap`` in affine charts ``x_chart = 1`` -> ``y_image_chart = 1``."""
    x = [Fraction(c) / Fraction(point[chart]) for c in point]
    G = pmap.evaluate(x)
    Gi = Fraction(G[image_chart])
    if Gi == 0:
        raise ZeroDivisionError("image coordinate used for the chart vanishes")
    jac = jacobian_matrix(pmap)
    D = [[entry.evaluate(x) for entry in row] for row in jac]
    n = pmap.n_vars
    rows = [a for a in range(n) if a != image_chart]
    cols = [b for b in range(n) if b != chart]
    return [[_norm((D[a][b] * Gi - G[a] * D[image_chart][b]) / Gi**2) for b in cols] for a in rows]


def verify_superattracting(pmap: PolynomialMap, p: ProjectivePoint) -> Certificate:
    """Exact check that ``p`` is fixed and the chart derivative there is zero."""
    name = f"superattracting {p!r}"
    coords = p.coords
    image = pmap.evaluate(coords)
    if all(c == 0 for c in image):
        return Certificate(name, False, {"reason": "indeterminate"})
    if not projectively_equal_exact(image, coords):
        return Certificate(name, False, {"reason": "not fixed", "image": repr(ProjectivePoint(image))})
    j = next(i for i, c in enumerate(coords) if c != 0)
    D = chart_derivative_exact(pmap, coords, j, j)
    for a, row in enumerate(D):
        for b, v in enumerate(row):
            if v != 0:
                return Certificate(name, False, {"reason": "nonzero derivative", "entry": (a, b), "value": str(v)})
    return Certificate(name, True, {"chart": j})


def check_holomorphic_at(pmap: PolynomialMap, points: Sequence[Sequence]) -> bool:
    """True when no component set vanishes simultaneously at any of ``points``."""
    for p in points:
        if all(c == 0 for c in pmap.evaluate(p)):
            return False
    return True


# -- restriction to flats ----------------------------------------------------

@dataclass(frozen=True)
class RestrictedMap:
    """``pmap`` restricted to ``flat``, written in the flat's coordinates."""

    flat: Flat
    map: PolynomialMap
    stripped: tuple = ()  # labels of induced forms removed as common factors, with repeats

    @property
    def m(self) -> int:
        return self.flat.m

    @property
    def degree(self) -> int:
        return self.map.degree

    def embed_point(self, y: Sequence) -> ProjectivePoint:
        return ProjectivePoint(self.flat.embed(y), exact=True)


def _proportional(a: Sequence[HomogeneousPolynomial], b: Sequence[HomogeneousPolynomial]):
    """Rational c with a == c * b componentwise, or None."""
    scalar = None
    for pa, pb in zip(a, b):
        if set(pa.terms) != set(pb.terms):
            return None
        for e, ca in pa.terms.items():
            r = Fraction(ca) / Fraction(pb.terms[e])
            if scalar is None:
                scalar = r
            elif r != scalar:
                return None
    return scalar


def restrict_map(pmap: PolynomialMap, flat: Flat, seed: int = 0) -> RestrictedMap:
    """Exact restriction of ``pmap`` to an invariant flat.

    Substitutes the flat's integer parametrization, reads the image off in
    flat coordinates, strips common factors that are powers of induced
    hyperplane forms (only when m >= 1), and content-normalizes.  The
    identity ``E ∘ h = g ∘ E`` (up to the stripped factor and a scalar) is
    asserted exactly.
    """
    forms = flat.forms()
    pulled = pmap.substitute(forms)
    rows = flat.free_rows()
    comps = [pulled[r] for r in rows]
    for i, row in enumerate(flat.embedding):
        recon = HomogeneousPolynomial.zero(flat.m + 1, pmap.degree)
        for a, h in zip(row, comps):
            if a:
                recon = recon + h.scale(a)
        if recon != pulled[i]:
            raise InvarianceViolationError(f"image of {flat} leaves the flat (row {i + 1})")
    stripped = []
    stripped_poly = HomogeneousPolynomial.constant(1, flat.m + 1)
    if flat.m >= 1:
        for h, ell in flat.induced_forms():
            while all(c.degree > 0 for c in comps):
                try:
                    new = [divide_by_linear(c, ell) for c in comps]
                except NotDivisibleError:
                    break
                comps = new
                stripped.append(h.label())
                stripped_poly = stripped_poly * ell
    if all(c.is_zero() for c in comps):
        raise InvarianceViolationError(f"restriction to {flat} vanishes identically")
    restricted = PolynomialMap(comps).normalized()

    lhs = []
    for row in flat.embedding:
        acc = HomogeneousPolynomial.zero(flat.m + 1, restricted.degree)
        for a, h in zip(row, restricted.components):
            if a:
                acc = acc + h.scale(a)
        lhs.append(acc * stripped_poly)
    if _proportional(pulled, lhs) is None:
        raise InvarianceViolationError(f"restriction identity failed on {flat}")

    if flat.m >= 1:
        if any(c.is_zero() for c in restricted.components):
            raise InvarianceViolationError(f"a component of the restriction to {flat} vanishes")
        rng = np.random.default_rng([seed, flat.m])
        Y = rng.standard_normal((50, flat.m + 1)) + 1j * rng.standard_normal((50, flat.m + 1))
        if np.any(np.abs(restricted.numeric(Y)).max(axis=1) == 0):
            raise InvarianceViolationError(f"restriction to {flat} has a common root at a sample point")
    return RestrictedMap(flat, restricted, tuple(stripped))


@dataclass(frozen=True)
class CriticalStructure:
    """Factorization of a restricted map's Jacobian determinant."""

    factors: tuple  # (hyperplane label, flat-coordinate linear form, multiplicity)
    residual: HomogeneousPolynomial
    extra_points: tuple = ()  # numeric roots of a non-constant residual (m == 1 only)

    @property
    def contained_in_arrangement(self) -> bool:
        return self.residual.degree == 0 and not self.residual.is_zero()


def critical_structure(rmap: RestrictedMap) -> CriticalStructure:
    """Induced hyperplane forms dividing the Jacobian determinant, with multiplicities."""
    m = rmap.m
    if m < 1:
        raise ValueError("a map on a point has no critical set")
    if m > MAX_EXACT_DET_K:
        raise ValueError("exact critical structure needs m <= 3")
    det = determinant(jacobian_matrix(rmap.map))
    factors = []
    for h, ell in rmap.flat.induced_forms():
        mult, det = multiplicity(det, ell)
        if mult:
            factors.append((h.label(), ell, mult))
    extra = ()
    if m == 1 and det.degree > 0:
        coeffs = [float(det.coefficient((det.degree - i, i))) for i in range(det.degree + 1)]
        extra = tuple(complex(r) for r in np.roots(coeffs[::-1]))
    return CriticalStructure(tuple(factors), det, extra)


def critical_points_on_line(rmap: RestrictedMap) -> list[ProjectivePoint]:
    """Exact critical points (ambient coordinates) of a restriction to a line."""
    if rmap.m != 1:
        raise ValueError("critical points as a finite set need a one-dimensional flat")
    cs = critical_structure(rmap)
    if not cs.contained_in_arrangement:
        raise ValueError("critical set is not contained in the induced arrangement")
    pts = []
    for _, ell, _ in cs.factors:
        a = ell.coefficient((1, 0))
        b = ell.coefficient((0, 1))
        pts.append(rmap.embed_point((b, -a)))
    return sorted(pts, key=lambda p: tuple(p.coords))


def flat_superattractors(flat: Flat) -> list[tuple]:
    """0/1 points of P^k lying on ``flat``, in flat coordinates."""
    rows = flat.free_rows()
    out = []
    for p in enumerate_superattractors(flat.k):
        y = tuple(p.coords[r] for r in rows)
        if any(y) and tuple(flat.embed(y)) == tuple(p.coords):
            out.append(y)
    return out


# -- float dynamics ----------------------------------------------------------

def critical_distance(X: np.ndarray, covectors: np.ndarray) -> np.ndarray:
    """Chordal-type distance from each row of ``X`` to the nearest hyperplane."""
    X = np.atleast_2d(X)
    C = np.asarray(covectors, dtype=float)
    num = np.abs(X @ C.T)
    den = np.linalg.norm(X, axis=1)[:, None] * np.linalg.norm(C, axis=1)[None, :]
    return (num / den).min(axis=1)


def arrangement_covectors(k: int) -> np.ndarray:
    return np.array([h.covector for h in hyperplane_arrangement(k)], dtype=float)


@dataclass
class OrbitRecord:
    start: ProjectivePoint
    points: list
    min_dist_to_critical: list | None = None

    def __len__(self):
        return len(self.points)


def iterate(pmap: PolynomialMap, p: ProjectivePoint, n: int, record_critical_distance: bool = False) -> OrbitRecord:
    """Float orbit ``p, g(p), ..., g^n(p)`` with per-step canonicalization."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    X = canonicalize(p.array())
    pts = [X[0]]
    for _ in range(n):
        X = evaluate_points(pmap, X)
        if not np.all(np.isfinite(X)):
            raise NumericOverflowError("orbit left the finite range")
        pts.append(X[0])
    dists = None
    if record_critical_distance:
        dists = critical_distance(np.array(pts), arrangement_covectors(pmap.k)).tolist()
    return OrbitRecord(p.to_float(), [ProjectivePoint(x, exact=False) for x in pts], dists)


def chart_derivatives(pmap: PolynomialMap, X: np.ndarray, image_charts: np.ndarray | None = None):
    """Chart derivatives (N, k, k) of ``pmap`` at canonical rows ``X``.

    The source chart is each row's leading coordinate; the target chart is
    ``image_charts`` if given, else the leading coordinate of the image.
    """
    X = np.atleast_2d(X)
    N, n = X.shape
    num = pmap.numeric
    G = num(X)
    D = num.jacobian(X)
    j = leading_index(X)
    i = leading_index(G) if image_charts is None else np.asarray(image_charts)
    ar = np.arange(N)
    Gi = G[ar, i]
    full = (D * Gi[:, None, None] - G[:, :, None] * D[ar, i, :][:, None, :]) / (Gi**2)[:, None, None]
    full *= X[ar, j][:, None, None]
    out = np.empty((N, n - 1, n - 1), dtype=complex)
    for r in range(N):
        rows = [a for a in range(n) if a != i[r]]
        cols = [b for b in range(n) if b != j[r]]
        out[r] = full[r][np.ix_(rows, cols)]
    return out


@dataclass(frozen=True)
class FixedPoint:
    point: ProjectivePoint
    multiplier: complex
    multiplicity: int = 1
    chart_value: complex | None = None  # x1/x2, None for the point at infinity


def find_fixed_points_dim1(pmap: PolynomialMap, polish_steps: int = 3) -> list[FixedPoint]:
    """Fixed points of a map on P^1 and their multipliers.

    Solves ``x2·g1 − x1·g2 = 0`` in the chart ``[x : 1]`` with an
    all-roots solver, adds ``[1:0]`` if it is fixed, and computes each
    multiplier as the chart derivative at the point.
    """
    if pmap.k != 1:
        raise ValueError("find_fixed_points_dim1 needs a map on P^1")
    n = 2
    x1 = HomogeneousPolynomial.variable(0, n)
    x2 = HomogeneousPolynomial.variable(1, n)
    F = x2 * pmap.components[0] - x1 * pmap.components[1]
    d1 = pmap.degree + 1
    # chart polynomial in x = x1/x2: coefficient of x^a is F[(a, d1 - a)]
    coeffs = [float(F.coefficient((a, d1 - a))) for a in range(d1 + 1)]
    top = max((a for a in range(d1 + 1) if coeffs[a] != 0), default=-1)
    if top < 0:
        raise RootSolverError("every point is fixed")
    poly = np.polynomial.Polynomial(coeffs[: top + 1])
    roots = poly.roots() if top > 0 else np.array([], dtype=complex)
    dpoly = poly.deriv()
    polished = []
    for r in roots:
        r = complex(r)
        for _ in range(polish_steps):
            dv = dpoly(r)
            if dv == 0:
                break
            step = poly(r) / dv
            if not np.isfinite(step):
                break
            r -= step
        polished.append(r)

    out = []
    # merge repeated roots into multiplicities
    for r in polished:
        for idx, fp in enumerate(out):
            if abs(fp.chart_value - r) < 1e-6:
                out[idx] = FixedPoint(fp.point, fp.multiplier, fp.multiplicity + 1, fp.chart_value)
                break
        else:
            out.append(FixedPoint(ProjectivePoint([r, 1.0], exact=False), 0j, 1, r))
    if top < d1:
        out.append(FixedPoint(ProjectivePoint([1.0, 0.0], exact=False), 0j, d1 - top, None))

    results = []
    for fp in out:
        X = fp.point.array()[None, :]
        image = evaluate_points(pmap, X)
        residual = float(chordal(image[0], X[0]))
        if residual >= PROJ_EQ_TOL:
            raise RootSolverError(f"fixed point {fp.point!r} has residual {residual:.3g}", residual)
        mult = complex(chart_derivatives(pmap, X, image_charts=leading_index(X))[0, 0, 0])
        results.append(FixedPoint(fp.point, mult, fp.multiplicity, fp.chart_value))
    results.sort(key=lambda f: (f.chart_value is None, abs(f.chart_value or 0), np.angle(f.chart_value or 0)))
    return results
