"""The S_{k+2} action on P^k, its transposition hyperplanes and their flats.

Group elements are integer matrices acting on x-coordinates.  The group
is generated by the coordinate permutations of S_{k+1} together with the
matrix ``T`` induced by the transposition ``(1, k+2)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import GroupClosureError, NotAFlatError
from .polynomial import HomogeneousPolynomial, PolynomialMap, check_dimension, _norm
from .projective import ProjectivePoint

Matrix = tuple[tuple[int, ...], ...]


def _matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _projective_key(m: Matrix) -> Matrix:
    """Representative of ``m`` up to nonzero scalar: primitive, first nonzero entry positive."""
    flat = [x for row in m for x in row]
    g = reduce(math.gcd, flat)
    lead = next(x for x in flat if x)
    if lead < 0:
        g = -g
    return tuple(tuple(x // g for x in row) for row in m)


@dataclass(frozen=True)
class GroupElement:
    matrix: Matrix
    word: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def key(self) -> Matrix:
        return _projective_key(self.matrix)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_matmul(self.matrix, other.matrix), self.word + other.word)

    def __call__(self, v: Sequence):
        return _matvec(self.matrix, v)

    def is_identity(self) -> bool:
        return self.key() == _identity(self.n)

    def determinant(self) -> Fraction:
        return _det([[Fraction(x) for x in row] for row in self.matrix])

    def inverse(self) -> "GroupElement":
        inv = _inverse([[Fraction(x) for x in row] for row in self.matrix])
        den = math.lcm(*(x.denominator for row in inv for x in row))
        return GroupElement(tuple(tuple(int(x * den) for x in row) for row in inv), ("inv",) + self.word)


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns (lowest index first)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    n_cols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence], n_cols: int) -> list[tuple[int, ...]]:
    """Integer basis of the right kernel, one vector per free column.

    The vector for free column ``f`` has a 1 in position ``f``, zeros in
    the other free positions, and is scaled to coprime integers.
    """
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        den = math.lcm(*(x.denominator for x in v))
        iv = [int(x * den) for x in v]
        g = reduce(math.gcd, iv)
        basis.append(tuple(x // g for x in iv))
    return basis


# -- generators and the group -----------------------------------------------

def t_matrix(k: int) -> GroupElement:
    """Matrix of the transposition (1, k+2): first column -1, identity elsewhere."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = k + 1
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        m[i][0] = -1
    return GroupElement(tuple(map(tuple, m)), ("T",))


def swap_matrix(k: int, i: int, j: int) -> GroupElement:
    """Permutation matrix exchanging x_i and x_j (1-based)."""
    n = k + 1
    perm = list(range(n))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    m = tuple(tuple(int(perm[r] == c) for c in range(n)) for r in range(n))
    return GroupElement(m, (f"s{i}{j}",))


def generators(k: int) -> list[GroupElement]:
    """Adjacent transpositions of S_{k+1} followed by ``T``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return [swap_matrix(k, i, i + 1) for i in range(1, k + 1)] + [t_matrix(k)]


def generate_group(k: int) -> list[GroupElement]:
    """Breadth-first closure of :func:`generators`, elements compared up to scalar."""
    check_dimension(k)
    n = k + 1
    bound = 2 * math.factorial(k + 2)
    identity = GroupElement(_identity(n), ())
    seen = {identity.key(): identity}
    queue = deque([identity])
    gens = generators(k)
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s * g
            key = h.key()
            if key not in seen:
                seen[key] = h
                queue.append(h)
                if len(seen) > bound:
                    raise GroupClosureError(f"closure exceeded {bound} elements")
    return list(seen.values())


# -- hyperplanes -------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """A transposition hyperplane ``{x_i = x_j}`` (Diff) or ``{x_i = 0}`` (Coord); 1-based."""

    kind: str
    indices: tuple[int, ...]
    n: int

    @classmethod
    def diff(cls, i: int, j: int, k: int) -> "Hyperplane":
        if not 1 <= i < j <= k + 1:
            raise ValueError(f"need 1 <= i < j <= {k + 1}")
        return cls("diff", (i, j), k + 1)

    @classmethod
    def coord(cls, i: int, k: int) -> "Hyperplane":
        if not 1 <= i <= k + 1:
            raise ValueError(f"need 1 <= i <= {k + 1}")
        return cls("coord", (i,), k + 1)

    @property
    def covector(self) -> tuple[int, ...]:
        v = [0] * self.n
        v[self.indices[0] - 1] = 1
        if self.kind == "diff":
            v[self.indices[1] - 1] = -1
        return tuple(v)

    def linear_form(self) -> HomogeneousPolynomial:
        return HomogeneousPolynomial.linear(self.covector)

    def contains(self, x: Sequence) -> bool:
        return sum(a * b for a, b in zip(self.covector, x)) == 0

    def label(self) -> str:
        if self.kind == "diff":
            return f"d:{self.indices[0]},{self.indices[1]}"
        return f"c:{self.indices[0]}"

    def __str__(self):
        if self.kind == "diff":
            return f"{{x{self.indices[0]}=x{self.indices[1]}}}"
        return f"{{x{self.indices[0]}=0}}"


def hyperplane_arrangement(k: int) -> list[Hyperplane]:
    """All ``(k+1)(k+2)/2`` transposition hyperplanes: Coord first, then Diff."""
    coords = [Hyperplane.coord(i, k) for i in range(1, k + 2)]
    diffs = [Hyperplane.diff(i, j, k) for i, j in combinations(range(1, k + 2), 2)]
    return coords + diffs


def parse_hyperplane(text: str, k: int) -> Hyperplane:
    """Parse ``"c:1"`` or ``"d:1,2"``."""
    kind, _, rest = text.strip().partition(":")
    idx = tuple(int(x) for x in rest.split(",") if x.strip())
    if kind == "c" and len(idx) == 1:
        return Hyperplane.coord(idx[0], k)
    if kind == "d" and len(idx) == 2:
        i, j = sorted(idx)
        return Hyperplane.diff(i, j, k)
    raise ValueError(f"cannot parse hyperplane {text!r}; expected 'c:i' or 'd:i,j'")


def _covector_key(v: Sequence) -> tuple:
    g = reduce(math.gcd, (int(x) for x in v))
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    return tuple(int(x) // g for x in v)


def hyperplane_for_covector(v: Sequence, k: int) -> Hyperplane | None:
    key = _covector_key(v)
    for h in hyperplane_arrangement(k):
        if _covector_key(h.covector) == key:
            return h
    return None


def act_on_covector(r: GroupElement, h: Hyperplane) -> tuple[int, ...]:
    """Covector of the image hyperplane ``r(h)``, i.e. ``covector · r^{-1}``."""
    inv = r.inverse().matrix
    c = h.covector
    n = len(c)
    return tuple(sum(c[i] * inv[i][j] for i in range(n)) for j in range(n))


def pointwise_fixed_hyperplane(r: GroupElement) -> Hyperplane | None:
    """The arrangement hyperplane fixed pointwise by a reflection ``r``, else None."""
    n = r.n
    k = n - 1
    diff = [[r.matrix[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    if rank(diff) != 1:
        return None
    row = next(row for row in diff if any(row))
    return hyperplane_for_covector(row, k)


# -- equivariance ------------------------------------------------------------

@dataclass(frozen=True)
class EquivarianceResult:
    ok: bool
    scalar: Fraction | None = None
    witness: tuple | None = None  # (component, exponent vector, lhs coef, rhs coef)


def check_equivariance(pmap: PolynomialMap, r: GroupElement) -> EquivarianceResult:
    """Exact test of ``pmap ∘ r == c · (r ∘ pmap)`` for some rational c != 0."""
    lhs = pmap.compose_linear(r.matrix)
    rhs = pmap.apply_matrix(r.matrix)
    scalar = None
    for i, (a, b) in enumerate(zip(lhs.components, rhs.components)):
        for e in sorted(set(a.terms) | set(b.terms)):
            ca, cb = a.terms.get(e, 0), b.terms.get(e, 0)
            if ca == 0 or cb == 0:
                return EquivarianceResult(False, None, (i, e, ca, cb))
            ratio = Fraction(ca) / Fraction(cb)
            if scalar is None:
                scalar = ratio
            elif ratio != scalar:
                return EquivarianceResult(False, None, (i, e, ca, cb))
    if scalar is None:
        return EquivarianceResult(False, None, None)
    return EquivarianceResult(True, _norm(scalar))


# -- superattractors and flats ------------------------------------------------

def enumerate_superattractors(k: int) -> list[ProjectivePoint]:
    """All 0/1 points of P^k, in lexicographic order of their 0/1 vectors."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return [ProjectivePoint(v, exact=True) for v in product((0, 1), repeat=k + 1) if any(v)]


def hyperplanes_through(point: Sequence, k: int) -> list[Hyperplane]:
    return [h for h in hyperplane_arrangement(k) if h.contains(point)]


@dataclass(frozen=True)
class Flat:
    """An intersection of transposition hyperplanes, parametrized as ``x = E y``."""

    m: int
    hyperplanes: tuple[Hyperplane, ...]
    embedding: tuple[tuple[int, ...], ...]  # (k+1) x (m+1)

    @property
    def k(self) -> int:
        return len(self.embedding) - 1

    def embed(self, y: Sequence) -> tuple:
        return _matvec(self.embedding, y)

    def forms(self) -> list[HomogeneousPolynomial]:
        """Row ``i`` of the embedding as a linear form in the flat coordinates."""
        return [HomogeneousPolynomial.linear(row) for row in self.embedding]

    def free_rows(self) -> list[int]:
        """Rows of the embedding forming an identity block (flat coordinate rows)."""
        rows = []
        for c in range(self.m + 1):
            unit = tuple(int(j == c) for j in range(self.m + 1))
            rows.append(next(i for i, row in enumerate(self.embedding) if row == unit))
        return rows

    def induced_forms(self) -> list[tuple[Hyperplane, HomogeneousPolynomial]]:
        """Restrictions of the arrangement hyperplanes not containing the flat, deduplicated."""
        seen = {}
        for h in hyperplane_arrangement(self.k):
            if h in self.hyperplanes:
                continue
            cov = _matvec(list(zip(*self.embedding)), h.covector)
            key = _covector_key(cov)
            seen.setdefault(key, h)
        return [(h, HomogeneousPolynomial.linear(key)) for key, h in seen.items()]

    def __str__(self):
        if not self.hyperplanes:
            return f"P^{self.k}"
        return " ∩ ".join(str(h) for h in self.hyperplanes)


def flat_from_hyperplanes(subset: Iterable[Hyperplane], k: int | None = None) -> Flat:
    """Intersection of ``subset``; an empty subset gives the whole space (needs ``k``)."""
    subset = list(subset)
    if k is None:
        if not subset:
            raise ValueError("k is required for an empty hyperplane subset")
        k = subset[0].n - 1
    n = k + 1
    rows = [h.covector for h in subset]
    r = rank(rows) if rows else 0
    if r >= n:
        raise NotAFlatError(f"{', '.join(map(str, subset))} have no common point in P^{k}")
    basis = kernel_basis(rows, n)
    embedding = tuple(zip(*basis))  # columns are basis vectors
    embedding = tuple(tuple(int(x) for x in row) for row in embedding)
    containing = tuple(
        h for h in hyperplane_arrangement(k)
        if all(sum(c * b for c, b in zip(h.covector, vec)) == 0 for vec in basis)
    )
    return Flat(m=k - r, hyperplanes=containing, embedding=embedding)


def all_flats(k: int) -> list[Flat]:
    """Every distinct intersection of arrangement hyperplanes (including P^k itself)."""
    arr = hyperplane_arrangement(k)
    flats = {(): flat_from_hyperplanes([], k)}
    for size in range(1, len(arr) + 1):
        for subset in combinations(arr, size):
            try:
                f = flat_from_hyperplanes(subset, k)
            except NotAFlatError:
                continue
            flats.setdefault(f.hyperplanes, f)
    return sorted(flats.values(), key=lambda f: (-f.m, [h.label() for h in f.hyperplanes]))
