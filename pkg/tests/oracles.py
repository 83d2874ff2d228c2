"""Independent sympy oracles shared by the tests."""

import math
from fractions import Fraction
from itertools import combinations

import sympy as sp


def to_sympy(poly, syms):
    total = sp.Integer(0)
    for exps, c in poly.terms.items():
        c = sp.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sp.Integer(c)
        total += c * sp.Mul(*[s**e for s, e in zip(syms, exps)])
    return total


def sympy_reference_map(k):
    """The rational formula expanded by sympy, cleared of denominators and content."""
    xs = sp.symbols(f"x1:{k + 2}")
    A = [sp.Integer(1)] + [
        sum(sp.Mul(*c) for c in combinations(xs, j)) for j in range(1, k + 2)
    ]
    comps = [
        sp.expand(xl**3 * sum((-1) ** s * sp.Rational(s + 1, s + 3) * xl**s * A[k - s] for s in range(k + 1)))
        for xl in xs
    ]
    polys = [sp.Poly(c * math.lcm(*range(3, k + 4)), *xs) for c in comps]
    content = math.gcd(*[int(c) for p in polys for c in p.coeffs()])
    return xs, [sp.expand(p.as_expr() / content) for p in polys]
