import math
from fractions import Fraction

import numpy as np
import pytest

from equidyn.errors import HolomorphyViolationError
from equidyn.polynomial import HomogeneousPolynomial as HP, PolynomialMap
from equidyn.projective import (
    ProjectivePoint,
    canonicalize,
    chordal,
    chordal_distance,
    evaluate_map,
    evaluate_points,
)


def P(*c):
    return ProjectivePoint(c, exact=True)


def test_exact_canonical_form():
    p = P(0, 2, 4)
    assert p.coords == (0, 1, 2)
    assert P(Fraction(1, 2), 1).coords == (1, 2)
    assert P(-3, 6) == P(1, -2)


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        P(0, 0)
    with pytest.raises(ValueError):
        ProjectivePoint([0.0, 0.0], exact=False)


def test_float_canonical_form():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((200, 3)) + 1j * rng.standard_normal((200, 3))
    C = canonicalize(X)
    np.testing.assert_allclose(np.abs(C).max(axis=1), 1.0, atol=1e-15)
    lead = np.argmax(np.abs(C), axis=1)
    lead_vals = C[np.arange(200), lead]
    assert np.all(lead_vals.imag == 0) and np.all(lead_vals.real > 0)
    # scaling invariance
    lam = 0.3 - 2.1j
    np.testing.assert_allclose(canonicalize(lam * X), C, atol=1e-14)


def test_float_canonical_tie_picks_lowest_index():
    c = canonicalize(np.array([1j, -1.0, 0.5]))[0]
    assert c[0] == 1.0
    np.testing.assert_allclose(c, [1.0, 1j, -0.5j], atol=1e-15)


@pytest.mark.parametrize(
    "p, q, expected",
    [((1, 0), (1, 0), 0.0), ((1, 0), (0, 1), 1.0), ((1, 1), (1, 0), 1 / math.sqrt(2))],
)
def test_chordal_examples(p, q, expected):
    assert chordal_distance(P(*p), P(*q)) == pytest.approx(expected, abs=1e-15)


def brute_chordal(x, y):
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    ip = abs(np.vdot(x, y)) ** 2 / (np.vdot(x, x).real * np.vdot(y, y).real)
    return math.sqrt(max(0.0, 1 - ip))


def test_chordal_matches_formula_and_is_scale_invariant():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        d = float(chordal(x, y))
        assert d == pytest.approx(brute_chordal(x, y), abs=1e-12)
        assert float(chordal(2j * x, -y)) == pytest.approx(d, abs=1e-12)
        assert float(chordal(x, y)) == pytest.approx(float(chordal(y, x)), abs=1e-12)


def test_chordal_accurate_for_close_points():
    x = np.array([1.0, 0.3 + 0.2j])
    y = x + np.array([0.0, 1e-12])
    # first order: |x1| |dx2| / |x|^2, where 1 - |<x,y>|^2 would cancel to zero
    assert float(chordal(x, y)) == pytest.approx(1e-12 / np.linalg.norm(x) ** 2, rel=1e-3)


def test_float_equality_uses_tolerance():
    a = ProjectivePoint([1.0, 0.5], exact=False)
    b = ProjectivePoint([2.0, 1.0 + 1e-12], exact=False)
    assert a == b
    assert a != ProjectivePoint([1.0, 0.6], exact=False)
    assert P(1, 1) == ProjectivePoint([3.0, 3.0], exact=False)


@pytest.mark.parametrize(
    "k, point, image",
    [(2, (1, 0, 0), (1, 0, 0)), (1, (1, 1), (1, 1)), (1, (2, 1), (0, 1)), (2, (1, 1, 1), (1, 1, 1))],
)
def test_evaluate_map_examples(maps, k, point, image):
    assert evaluate_map(maps[k], P(*point)) == P(*image)
    assert evaluate_map(maps[k], P(*point).to_float()) == P(*image)


def test_evaluate_map_dimension_mismatch(maps):
    with pytest.raises(ValueError):
        evaluate_map(maps[1], P(1, 0, 0))


def test_indeterminacy_detected():
    x1, x2 = HP.variable(0, 2), HP.variable(1, 2)
    f = PolynomialMap([x1 * x2, x1 * x1])
    with pytest.raises(HolomorphyViolationError):
        evaluate_map(f, P(0, 1))


def test_float_and_exact_evaluation_agree(maps):
    rng = np.random.default_rng(7)
    for k in (1, 2, 3):
        for _ in range(30):
            pt = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-6, 7, k + 1), rng.integers(1, 6, k + 1))]
            if not any(pt):
                continue
            exact = evaluate_map(maps[k], ProjectivePoint(pt, exact=True))
            approx = evaluate_points(maps[k], np.array([float(c) for c in pt])[None, :])[0]
            assert float(chordal(exact.array(), approx)) < 1e-10


def test_homogeneity_float(maps):
    rng = np.random.default_rng(3)
    X = rng.standard_normal((100, 3)) + 1j * rng.standard_normal((100, 3))
    lam = 0.7 + 0.4j
    g = maps[2].numeric
    np.testing.assert_allclose(g(lam * X), lam**5 * g(X), rtol=1e-10, atol=1e-12)
