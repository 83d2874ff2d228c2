"""Exact homogeneous polynomials and polynomial maps over the rationals.

Coefficients are plain Python ``int`` or :class:`fractions.Fraction`
values; a Fraction with unit denominator is always stored as an int so
that integer maps stay in fast integer arithmetic.  Exponent vectors are
tuples of length ``n_vars``.  Variables are displayed 1-based
(``x1, x2, ...``) to match the usual projective notation.

Objects in this module are treated as immutable values.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import cached_property, reduce
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateMapError,
    DimensionUnsupportedError,
    NotDivisibleError,
    UnsupportedDivisorError,
)

DEFAULT_MAX_K = 6
MAX_EXACT_DET_K = 3


def max_k() -> int:
    """Largest supported projective dimension (``EQUIDYN_MAX_K`` overrides)."""
    value = os.environ.get("EQUIDYN_MAX_K")
    if value is None:
        return DEFAULT_MAX_K
    try:
        return int(value)
    except ValueError:
        raise DimensionUnsupportedError(f"EQUIDYN_MAX_K={value!r} is not an integer") from None


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _is_exact(c) -> bool:
    return isinstance(c, Rational)


class HomogeneousPolynomial:
    """A homogeneous polynomial with exact rational coefficients.

    Parameters
    ----------
    n_vars : int
        Number of variables (``k + 1`` for a polynomial on P^k).
    degree : int
        Total degree.  The zero polynomial keeps the degree it was
        created with so that homogeneous bookkeeping still works.
    terms : mapping
        Exponent tuple -> coefficient.  Zero coefficients are dropped.
    """

    __slots__ = ("n_vars", "degree", "terms", "__weakref__")

    def __init__(self, n_vars: int, degree: int, terms: Mapping[tuple, Rational] | None = None):
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars:
                raise ValueError(f"exponent vector {exps} does not have length {n_vars}")
            if sum(exps) != degree or min(exps, default=0) < 0:
                raise ValueError(f"exponent vector {exps} is not of degree {degree}")
            if not _is_exact(c):
                raise TypeError(f"coefficient {c!r} is not rational")
            c = _norm(Fraction(c)) if not isinstance(c, int) else c
            if c:
                clean[exps] = c
        self.n_vars = n_vars
        self.degree = degree
        self.terms = clean

    @classmethod
    def _raw(cls, n_vars, degree, terms):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.n_vars = n_vars
        obj.degree = degree
        obj.terms = terms
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n_vars: int, degree: int = 0) -> "HomogeneousPolynomial":
        return cls._raw(n_vars, degree, {})

    @classmethod
    def constant(cls, value, n_vars: int) -> "HomogeneousPolynomial":
        return cls(n_vars, 0, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, i: int, n_vars: int) -> "HomogeneousPolynomial":
        """The coordinate ``x_{i+1}`` (``i`` is 0-based)."""
        e = [0] * n_vars
        e[i] = 1
        return cls._raw(n_vars, 1, {tuple(e): 1})

    @classmethod
    def linear(cls, covector: Sequence) -> "HomogeneousPolynomial":
        """Linear form ``sum_i covector[i] * x_i``."""
        n = len(covector)
        terms = {}
        for i, c in enumerate(covector):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(n, 1, terms)

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree == 0 or not self.terms

    def constant_value(self):
        if self.degree != 0:
            raise ValueError("polynomial is not a constant")
        return self.terms.get((0,) * self.n_vars, 0)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficients_are_integers(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def content(self) -> Fraction:
        """Positive rational c such that ``self / c`` has coprime integer coefficients."""
        return _content(self.terms.values())

    def primitive(self) -> "HomogeneousPolynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    def leading_coefficient(self):
        """Coefficient of the lexicographically largest exponent vector."""
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    def __eq__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            if self.n_vars != other.n_vars:
                return False
            if not self.terms and not other.terms:
                return True
            return self.degree == other.degree and self.terms == other.terms
        if _is_exact(other):
            if other == 0:
                return not self.terms
            return self.degree == 0 and self.terms == {(0,) * self.n_vars: other}
        return NotImplemented

    def __hash__(self):
        return hash((self.n_vars, self.degree if self.terms else None, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.n_vars != self.n_vars:
            raise ValueError("polynomials live in different numbers of variables")
        if other.terms and self.terms and other.degree != self.degree:
            raise ValueError(f"cannot add homogeneous polynomials of degree {self.degree} and {other.degree}")

    def __add__(self, other):
        if _is_exact(other) and not isinstance(other, HomogeneousPolynomial):
            if other == 0:
                return self
            other = HomogeneousPolynomial.constant(other, self.n_vars)
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = _norm(v)
            else:
                terms.pop(e, None)
        return HomogeneousPolynomial._raw(self.n_vars, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return HomogeneousPolynomial._raw(self.n_vars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "HomogeneousPolynomial":
        if not factor:
            return HomogeneousPolynomial.zero(self.n_vars, self.degree)
        if factor == 1:
            return self
        return HomogeneousPolynomial._raw(
            self.n_vars, self.degree, {e: _norm(c * factor) for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            if other.n_vars != self.n_vars:
                raise ValueError("polynomials live in different numbers of variables")
            degree = self.degree + other.degree
            if not self.terms or not other.terms:
                return HomogeneousPolynomial.zero(self.n_vars, degree)
            terms: dict = {}
            get = terms.get
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = get(e, 0) + c1 * c2
            terms = {e: _norm(c) for e, c in terms.items() if c}
            return HomogeneousPolynomial._raw(self.n_vars, degree, terms)
        if _is_exact(other):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = HomogeneousPolynomial.constant(1, self.n_vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus and substitution ---------------------------------------
    def derivative(self, j: int) -> "HomogeneousPolynomial":
        """Formal partial derivative with respect to ``x_{j+1}``."""
        degree = max(self.degree - 1, 0)
        terms = {}
        for e, c in self.terms.items():
            if e[j]:
                ne = e[:j] + (e[j] - 1,) + e[j + 1:]
                terms[ne] = c * e[j]
        return HomogeneousPolynomial._raw(self.n_vars, degree, terms)

    def evaluate(self, values: Sequence):
        """Evaluate at a point; works for exact rationals and for complex floats."""
        if len(values) != self.n_vars:
            raise ValueError(f"expected {self.n_vars} values, got {len(values)}")
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, p in zip(values, e):
                if p:
                    term = term * v**p
            total = total + term
        return _norm(total) if isinstance(total, Fraction) else total

    def substitute(self, forms: Sequence["HomogeneousPolynomial"]) -> "HomogeneousPolynomial":
        """Replace ``x_j`` by ``forms[j]`` (all forms share n_vars and degree)."""
        if len(forms) != self.n_vars:
            raise ValueError(f"need {self.n_vars} substitution forms, got {len(forms)}")
        n_new = forms[0].n_vars
        fdeg = forms[0].degree
        degree = self.degree * fdeg
        powers: list[dict[int, HomogeneousPolynomial]] = [dict() for _ in forms]

        def power(j, p):
            cache = powers[j]
            if p not in cache:
                if p == 0:
                    cache[p] = HomogeneousPolynomial.constant(1, n_new)
                elif p == 1:
                    cache[p] = forms[j]
                else:
                    cache[p] = power(j, p - 1) * forms[j]
            return cache[p]

        acc: dict = {}
        for e, c in self.terms.items():
            term = None
            for j, p in enumerate(e):
                if p:
                    pj = power(j, p)
                    term = pj if term is None else term * pj
            if term is None:
                term = HomogeneousPolynomial.constant(1, n_new)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + c * tc
        terms = {e: _norm(v) for e, v in acc.items() if v}
        return HomogeneousPolynomial._raw(n_new, degree, terms)

    def numeric_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent matrix (T, n) and complex coefficient vector (T,)."""
        if not self.terms:
            return np.zeros((0, self.n_vars), dtype=np.int64), np.zeros(0, dtype=complex)
        exps = np.array(list(self.terms.keys()), dtype=np.int64)
        coefs = np.array([float(c) for c in self.terms.values()], dtype=complex)
        return exps, coefs

    # -- display ----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if p == 1 else f"x{i + 1}^{p}" for i, p in enumerate(e) if p
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"HomogeneousPolynomial(n_vars={self.n_vars}, degree={self.degree}, {self})"


def _content(coefs: Iterable) -> Fraction:
    coefs = [Fraction(c) for c in coefs if c]
    if not coefs:
        return Fraction(0)
    num = reduce(math.gcd, (c.numerator for c in coefs))
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coefs))
    return Fraction(abs(num), den)


def elementary_symmetric_all(values: Sequence) -> list:
    """All elementary symmetric functions ``A_0 .. A_n`` of ``values``.

    Uses the one-pass product recurrence for ``prod(t + x_i)``; works for
    any ring elements supporting ``+`` and ``*`` (ints, Fractions, complex,
    :class:`HomogeneousPolynomial`).

    >>> elementary_symmetric_all([2, 3, 5])
    [1, 10, 31, 30]
    """
    n = len(values)
    if n < 1:
        raise ValueError("need at least one value")
    A: list = [1] + [0] * n
    for i, x in enumerate(values, start=1):
        for j in range(i, 0, -1):
            A[j] = A[j] + x * A[j - 1]
    return A


class PolynomialMap:
    """A holomorphic-candidate map ``[P_1 : ... : P_{k+1}]`` on P^k."""

    def __init__(self, components: Sequence[HomogeneousPolynomial]):
        components = tuple(components)
        if not components:
            raise ValueError("a polynomial map needs at least one component")
        n = components[0].n_vars
        if len(components) != n:
            raise ValueError(f"{len(components)} components for {n} variables")
        degrees = {c.degree for c in components if not c.is_zero()}
        if len(degrees) > 1:
            raise ValueError(f"components have mixed degrees {sorted(degrees)}")
        if any(c.n_vars != n for c in components):
            raise ValueError("components have mixed numbers of variables")
        self.components = components
        self.degree = degrees.pop() if degrees else components[0].degree

    @property
    def k(self) -> int:
        return len(self.components) - 1

    @property
    def n_vars(self) -> int:
        return len(self.components)

    def __eq__(self, other):
        if not isinstance(other, PolynomialMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        body = " : ".join(str(c) for c in self.components)
        return f"PolynomialMap(k={self.k}, degree={self.degree}, [{body}])"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def evaluate(self, values: Sequence) -> tuple:
        return tuple(c.evaluate(values) for c in self.components)

    def scale(self, factor) -> "PolynomialMap":
        return PolynomialMap([c.scale(factor) for c in self.components])

    def content(self) -> Fraction:
        return _content(v for c in self.components for v in c.terms.values())

    def normalized(self) -> "PolynomialMap":
        """Divide by the content so the coefficients are coprime integers."""
        if self.is_zero():
            raise DegenerateMapError("all components vanish identically")
        return self.scale(1 / self.content())

    def compose_linear(self, matrix) -> "PolynomialMap":
        """``self ∘ M``: substitute ``x -> M x`` into every component."""
        m = _as_square(matrix, self.n_vars)
        forms = [HomogeneousPolynomial.linear(row) for row in m]
        forms = [f if f.n_vars == self.n_vars else HomogeneousPolynomial.zero(self.n_vars, 1) for f in forms]
        return PolynomialMap([c.substitute(forms) for c in self.components])

    def apply_matrix(self, matrix) -> "PolynomialMap":
        """``M ∘ self``: take linear combinations of the components."""
        m = _as_square(matrix, self.n_vars)
        out = []
        for row in m:
            acc = HomogeneousPolynomial.zero(self.n_vars, self.degree)
            for a, comp in zip(row, self.components):
                if a:
                    acc = acc + comp.scale(a)
            out.append(acc)
        return PolynomialMap(out)

    def substitute(self, forms: Sequence[HomogeneousPolynomial]) -> tuple:
        """Components pulled back along ``x_j -> forms[j]`` (tuple, not a map)."""
        return tuple(c.substitute(forms) for c in self.components)

    def jacobian_matrix(self) -> list[list[HomogeneousPolynomial]]:
        return jacobian_matrix(self)

    @cached_property
    def numeric(self) -> "NumericMap":
        return NumericMap(self)


def _as_square(matrix, n):
    m = [list(row) for row in matrix]
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"expected a {n}x{n} matrix")
    return [[_norm(Fraction(a)) if not isinstance(a, int) else a for a in row] for row in m]


def check_dimension(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1 or k > max_k():
        raise DimensionUnsupportedError(f"k={k} outside supported range 1..{max_k()}")


def build_equivariant_map(k: int) -> PolynomialMap:
    """The symmetric critically finite map of degree ``k + 3`` on P^k.

    Component ``l`` is ``x_l^3 * sum_s (-1)^s (s+1)/(s+3) x_l^s A_{k-s}``,
    cleared of denominators by ``lcm(3, ..., k+3)`` and then divided by the
    content, so the result has coprime integer coefficients.
    """
    check_dimension(k)
    n = k + 1
    xs = [HomogeneousPolynomial.variable(i, n) for i in range(n)]
    A = elementary_symmetric_all(xs)
    scale = math.lcm(*range(3, k + 4))
    weights = [Fraction((-1) ** s * (s + 1), s + 3) * scale for s in range(k + 1)]
    components = []
    for l in range(n):
        inner = HomogeneousPolynomial.zero(n, k)
        for s in range(k + 1):
            inner = inner + (xs[l] ** s) * A[k - s] * _norm(weights[s])
        components.append(xs[l] ** 3 * inner)
    return PolynomialMap(components).normalized()


def jacobian_matrix(pmap: PolynomialMap) -> list[list[HomogeneousPolynomial]]:
    """Entry ``[i][j]`` is the partial derivative of component i in x_j."""
    return [[c.derivative(j) for j in range(pmap.n_vars)] for c in pmap.components]


def determinant(matrix: Sequence[Sequence[HomogeneousPolynomial]]) -> HomogeneousPolynomial:
    """Exact determinant by cofactor expansion with memoized minors."""
    n = len(matrix)
    memo: dict = {}

    def minor(row, cols):
        if row == n:
            return None
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, j in enumerate(cols):
            entry = matrix[row][j]
            if entry.is_zero():
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry if rest is None else entry * rest
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            nv = matrix[0][0].n_vars
            acc = HomogeneousPolynomial.zero(nv, sum(matrix[r][0].degree for r in range(row, n)))
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def jacobian_det_poly(pmap: PolynomialMap) -> HomogeneousPolynomial:
    """Exact Jacobian determinant of the homogeneous lift (k <= 3)."""
    if pmap.k > MAX_EXACT_DET_K:
        raise DimensionUnsupportedError(
            f"exact Jacobian determinant is capped at k={MAX_EXACT_DET_K}; use the numeric fallback"
        )
    return determinant(jacobian_matrix(pmap))


def poly_compose_linear(pmap: PolynomialMap, matrix) -> PolynomialMap:
    """``pmap ∘ matrix``, expanded and content-normalized."""
    return pmap.compose_linear(matrix).normalized()


# -- exact division by linear forms -----------------------------------------

def divide_by_linear(num: HomogeneousPolynomial, ell: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Exact quotient ``num / ell`` for a linear form ``ell``.

    Eliminates the pivot variable (lowest index with nonzero coefficient in
    ``ell``) degree by degree; whatever is left is the substitution
    remainder ``num|_{ell=0}``.  Raises :class:`NotDivisibleError` when it
    is nonzero.
    """
    if ell.degree != 1 or ell.is_zero():
        raise UnsupportedDivisorError("divisor is not a nonzero linear form")
    if ell.n_vars != num.n_vars:
        raise ValueError("polynomials live in different numbers of variables")
    n = num.n_vars
    lin = {}
    for e, c in ell.terms.items():
        lin[e.index(1)] = c
    p = min(lin)
    ap = lin[p]
    others = [(i, c) for i, c in lin.items() if i != p]
    rem = dict(num.terms)
    quot: dict = {}
    if not rem:
        return HomogeneousPolynomial.zero(n, max(num.degree - 1, 0))
    top = max(e[p] for e in rem)
    for level in range(top, 0, -1):
        for e in [e for e in rem if e[p] == level]:
            c = rem.pop(e)
            q = _norm(Fraction(c) / ap) if not (isinstance(c, int) and c % ap == 0) else c // ap
            qe = e[:p] + (e[p] - 1,) + e[p + 1:]
            quot[qe] = q
            for i, ci in others:
                ne = list(qe)
                ne[i] += 1
                ne = tuple(ne)
                v = rem.get(ne, 0) - q * ci
                if v:
                    rem[ne] = _norm(v)
                else:
                    rem.pop(ne, None)
    if rem:
        raise NotDivisibleError(HomogeneousPolynomial._raw(n, num.degree, rem))
    return HomogeneousPolynomial._raw(n, num.degree - 1, quot)


def linear_factors_of(div: HomogeneousPolynomial) -> tuple[object, list[HomogeneousPolynomial]]:
    """Split a supported divisor into (constant, [linear forms])."""
    if div.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if div.degree == 0:
        return div.constant_value(), []
    if div.degree == 1:
        return 1, [div]
    if div.is_monomial():
        (e, c), = div.terms.items()
        forms = []
        for i, p in enumerate(e):
            forms.extend([HomogeneousPolynomial.variable(i, div.n_vars)] * p)
        return c, forms
    raise UnsupportedDivisorError(
        "divisor must be a linear form, a monomial, or an explicit list of linear factors"
    )


def poly_divide_exact(num: HomogeneousPolynomial, div) -> HomogeneousPolynomial:
    """Exact quotient of ``num`` by a product of linear forms.

    ``div`` may be a constant, a linear form, a monomial, or a sequence of
    linear forms standing for their product.  Raises
    :class:`NotDivisibleError` (with the remainder witness) when the
    division is not exact.
    """
    if isinstance(div, HomogeneousPolynomial):
        const, forms = linear_factors_of(div)
    else:
        const, forms = 1, list(div)
        for f in forms:
            if not isinstance(f, HomogeneousPolynomial) or f.degree != 1:
                raise UnsupportedDivisorError("explicit factors must be linear forms")
    q = num
    for f in forms:
        q = divide_by_linear(q, f)
    if const != 1:
        q = q.scale(Fraction(1) / Fraction(const))
    return q


def multiplicity(num: HomogeneousPolynomial, ell: HomogeneousPolynomial) -> tuple[int, HomogeneousPolynomial]:
    """Largest m with ell^m | num, and the cofactor ``num / ell^m``."""
    if num.is_zero():
        raise ValueError("the zero polynomial is divisible by every power")
    m = 0
    while num.degree > 0:
        try:
            num = divide_by_linear(num, ell)
        except NotDivisibleError:
            break
        m += 1
    return m, num


class NumericMap:
    """Vectorized complex evaluation of a :class:`PolynomialMap` and its Jacobian."""

    def __init__(self, pmap: PolynomialMap):
        self.n = pmap.n_vars
        self.degree = pmap.degree
        self._comp = [c.numeric_arrays() for c in pmap.components]
        jac = jacobian_matrix(pmap)
        self._jac = [[e.numeric_arrays() for e in row] for row in jac]

    def _powers(self, X, top):
        P = np.empty(X.shape + (top + 1,), dtype=complex)
        P[..., 0] = 1.0
        for p in range(1, top + 1):
            P[..., p] = P[..., p - 1] * X
        return P

    @staticmethod
    def _eval(P, exps, coefs):
        if len(coefs) == 0:
            return np.zeros(P.shape[0], dtype=complex)
        n = exps.shape[1]
        vals = P[:, np.arange(n)[None, :], exps]  # (N, T, n)
        return np.prod(vals, axis=-1) @ coefs

    def __call__(self, X: np.ndarray) -> np.ndarray:
        """Evaluate the homogeneous lift on rows of ``X`` (shape (N, k+1))."""
        X = np.atleast_2d(X)
        P = self._powers(X, self.degree)
        return np.stack([self._eval(P, e, c) for e, c in self._comp], axis=1)

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        """Jacobian of the homogeneous lift, shape (N, k+1, k+1)."""
        X = np.atleast_2d(X)
        P = self._powers(X, max(self.degree - 1, 0))
        out = np.empty((X.shape[0], self.n, self.n), dtype=complex)
        for i, row in enumerate(self._jac):
            for j, (e, c) in enumerate(row):
                out[:, i, j] = self._eval(P, e, c)
        return out
