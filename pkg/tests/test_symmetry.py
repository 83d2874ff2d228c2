import math
from itertools import permutations

import pytest

from equidyn.errors import NotAFlatError
from equidyn.projective import ProjectivePoint
from equidyn.symmetry import (
    GroupElement,
    Hyperplane,
    act_on_covector,
    all_flats,
    check_equivariance,
    enumerate_superattractors,
    flat_from_hyperplanes,
    generate_group,
    generators,
    hyperplane_arrangement,
    kernel_basis,
    parse_hyperplane,
    pointwise_fixed_hyperplane,
    rank,
    swap_matrix,
    t_matrix,
)


def identity(n):
    return GroupElement(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), ())


def test_t_matrix_examples():
    assert t_matrix(1).matrix == ((-1, 0), (-1, 1))
    assert t_matrix(2).matrix == ((-1, 0, 0), (-1, 1, 0), (-1, 0, 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_generators_are_involutions(k):
    gens = generators(k)
    assert len(gens) == k + 1
    for g in gens:
        assert (g * g).is_identity()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_group_order(k):
    group = generate_group(k)
    assert len(group) == math.factorial(k + 2)
    assert any(g.is_identity() for g in group)
    assert len({g.key() for g in group}) == len(group)


def test_group_is_closed_k2():
    group = generate_group(2)
    keys = {g.key() for g in group}
    for a in group:
        for b in group:
            assert (a * b).key() in keys


def test_group_matches_permutation_model_k2():
    """The action on the covectors (e_i, e_i - e_j) realizes S_4 on {x_1, x_2, x_3, 0}."""
    # permutation group on 4 letters: 24 elements, 9 transpositions-or-products of order 2
    group = generate_group(2)
    orders = []
    for g in group:
        h, n = g, 1
        while not h.is_identity():
            h, n = h * g, n + 1
        orders.append(n)
    expected = []
    for p in permutations(range(4)):
        seen, lens = set(), []
        for s in range(4):
            if s in seen:
                continue
            c, L = s, 0
            while c not in seen:
                seen.add(c)
                c, L = p[c], L + 1
            lens.append(L)
        expected.append(math.lcm(*lens))
    assert sorted(orders) == sorted(expected)


def test_arrangement_sizes():
    assert [len(hyperplane_arrangement(k)) for k in (1, 2, 3)] == [3, 6, 10]
    labels = [h.label() for h in hyperplane_arrangement(1)]
    assert labels == ["c:1", "c:2", "d:1,2"]


def test_hyperplane_covectors():
    assert Hyperplane.diff(1, 3, 2).covector == (1, 0, -1)
    assert Hyperplane.coord(2, 2).covector == (0, 1, 0)
    with pytest.raises(ValueError):
        Hyperplane.diff(2, 2, 2)
    with pytest.raises(ValueError):
        Hyperplane.coord(4, 2)


def test_parse_hyperplane():
    assert parse_hyperplane("c:1", 2) == Hyperplane.coord(1, 2)
    assert parse_hyperplane("d:3,1", 2) == Hyperplane.diff(1, 3, 2)
    with pytest.raises(ValueError):
        parse_hyperplane("x:1", 2)


def test_pointwise_fixed_hyperplane():
    assert pointwise_fixed_hyperplane(swap_matrix(2, 1, 2)) == Hyperplane.diff(1, 2, 2)
    for k in (1, 2, 3):
        assert pointwise_fixed_hyperplane(t_matrix(k)) == Hyperplane.coord(1, k)
    assert pointwise_fixed_hyperplane(identity(3)) is None


@pytest.mark.parametrize("k", [1, 2, 3])
def test_arrangement_is_exactly_the_reflection_hyperplanes(k):
    fixed = {pointwise_fixed_hyperplane(g) for g in generate_group(k)} - {None}
    assert fixed == set(hyperplane_arrangement(k))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_group_permutes_arrangement(k):
    arr = {h.covector for h in hyperplane_arrangement(k)}
    from equidyn.symmetry import hyperplane_for_covector

    for g in generate_group(k):
        for h in hyperplane_arrangement(k):
            assert hyperplane_for_covector(act_on_covector(g, h), k) is not None
    assert len(arr) == len(hyperplane_arrangement(k))


def test_equivariance_identity_and_swap(maps):
    res = check_equivariance(maps[1], identity(2))
    assert res.ok and res.scalar == 1
    res = check_equivariance(maps[1], swap_matrix(1, 1, 2))
    assert res.ok and res.scalar == 1


@pytest.mark.parametrize("k", [1, 2])
def test_equivariance_all_elements(maps, k):
    assert all(check_equivariance(maps[k], r).ok for r in generate_group(k))


def test_equivariance_fails_for_non_symmetric_map(maps):
    from equidyn.polynomial import HomogeneousPolynomial as HP, PolynomialMap

    x1, x2 = HP.variable(0, 2), HP.variable(1, 2)
    f = PolynomialMap([x1**2, x1 * x2 + x2**2])
    res = check_equivariance(f, swap_matrix(1, 1, 2))
    assert not res.ok and res.witness is not None


def test_superattractor_enumeration():
    assert [len(enumerate_superattractors(k)) for k in (1, 2, 3)] == [3, 7, 15]
    expected = {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert {p.coords for p in enumerate_superattractors(2)} == expected
    assert [p.coords for p in enumerate_superattractors(1)] == [(0, 1), (1, 0), (1, 1)]


def test_rank_and_kernel():
    rows = [(1, 0, -1), (0, 1, -1)]
    assert rank(rows) == 2
    basis = kernel_basis(rows, 3)
    assert basis == [(1, 1, 1)]


def test_flat_examples():
    f = flat_from_hyperplanes([Hyperplane.coord(1, 2)])
    assert f.m == 1
    assert f.embedding == ((0, 0), (1, 0), (0, 1))
    pt = flat_from_hyperplanes([Hyperplane.coord(1, 2), Hyperplane.coord(2, 2)])
    assert pt.m == 0 and ProjectivePoint(pt.embed((1,))) == ProjectivePoint((0, 0, 1))
    with pytest.raises(NotAFlatError):
        flat_from_hyperplanes([Hyperplane.coord(i, 2) for i in (1, 2, 3)])


def test_flat_collects_all_containing_hyperplanes():
    f = flat_from_hyperplanes([Hyperplane.diff(1, 2, 2), Hyperplane.diff(2, 3, 2)])
    assert f.m == 0
    assert set(f.hyperplanes) == {Hyperplane.diff(1, 2, 2), Hyperplane.diff(1, 3, 2), Hyperplane.diff(2, 3, 2)}


def test_whole_space_flat():
    f = flat_from_hyperplanes([], 2)
    assert f.m == 2 and f.hyperplanes == ()


@pytest.mark.parametrize("k, points, lines", [(2, 7, 6)])
def test_intersection_lattice_counts(k, points, lines):
    flats = all_flats(k)
    assert sum(f.m == 0 for f in flats) == points
    assert sum(f.m == 1 for f in flats) == lines
    # every point of the lattice is a 0/1 point
    pts = {ProjectivePoint(f.embed((1,))) for f in flats if f.m == 0}
    assert pts == set(enumerate_superattractors(k))


def test_lattice_points_k3_are_the_superattractors():
    pts = {ProjectivePoint(f.embed((1,))) for f in all_flats(3) if f.m == 0}
    assert pts == set(enumerate_superattractors(3))
