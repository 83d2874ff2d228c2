import math

import numpy as np
import pytest

from equidyn.basins import (
    UNRESOLVED,
    attractor_array,
    backward_samples,
    basin_survey,
    classify_basin,
    classify_points,
    expansion_probe,
    orbit_growth,
    sample_points,
    seeded_growth,
)
from equidyn.dynamics import arrangement_covectors, critical_distance
from equidyn.projective import ProjectivePoint, chordal, evaluate_points

OMEGA = (1 + 1j * math.sqrt(3)) / 2


def P(*c):
    return ProjectivePoint(c, exact=True)


def test_classify_examples(maps):
    g = maps[1]
    # attractor order: [0:1], [1:0], [1:1]
    assert classify_basin(g, P(1, 1)).attractor == 2
    assert classify_basin(g, P(1, 1)).iterations == 0
    lab = classify_basin(g, P(2, 1))
    assert lab.attractor == 0 and lab.iterations <= 2
    rep = classify_basin(g, ProjectivePoint([OMEGA, 1], exact=False))
    assert rep.attractor is None and not rep.captured


@pytest.mark.parametrize("k", [1, 2])
def test_every_attractor_captures_itself(maps, k):
    A = attractor_array(k)
    labels, iters, _ = classify_points(maps[k], A.copy(), A, 10, 1e-8)
    assert labels.tolist() == list(range(len(A)))
    assert iters.tolist() == [0] * len(A)


def test_capture_implies_close_and_decreasing(maps):
    g = maps[2]
    A = attractor_array(2)
    X = sample_points(3, 0, 300, 3)
    labels, iters, _ = classify_points(g, X.copy(), A, 5000, 1e-8)
    for x, lab, n in zip(X, labels, iters):
        if lab == UNRESOLVED:
            continue
        y = x[None, :]
        for _ in range(n):
            y = evaluate_points(g, y)
        d = float(chordal(y[0], A[lab]))
        dn = float(chordal(evaluate_points(g, y)[0], A[lab]))
        assert d < 1e-8
        assert dn < d or dn <= 1e-14


def test_sample_points_are_per_index(maps):
    a = sample_points(5, 0, 10, 3)
    b = sample_points(5, 4, 10, 3)
    np.testing.assert_array_equal(a[4:], b)
    np.testing.assert_allclose(np.abs(a).max(axis=1), 1.0)


def test_fubini_study_sampling_is_unitarily_invariant():
    """|x_1|^2 / |x|^2 is Beta(1, k) for FS-uniform points on P^k; mean 1/(k+1)."""
    X = sample_points(0, 0, 20000, 3)
    r = np.abs(X[:, 0]) ** 2 / np.sum(np.abs(X) ** 2, axis=1)
    assert abs(r.mean() - 1 / 3) < 4 * math.sqrt(1 / 18 / 20000)  # Beta(1, 2) variance 1/18


def test_empty_survey(maps):
    rep = basin_survey(maps[1], 0, 1)
    assert rep.sample_count == 0 and sum(rep.per_attractor_counts) == 0 and rep.unresolved_count == 0


def test_survey_conservation_and_determinism(maps):
    a = basin_survey(maps[2], 5000, 7, threads=1)
    b = basin_survey(maps[2], 5000, 7, threads=8)
    assert sum(a.per_attractor_counts) + a.unresolved_count == 5000
    assert a == b  # wall_time is excluded from comparison
    da, db = a.to_json_dict(), b.to_json_dict()
    da.pop("wall_ms"), db.pop("wall_ms")
    assert da == db


def test_survey_json_schema(maps):
    d = basin_survey(maps[1], 100, 42).to_json_dict()
    assert set(d) == {"k", "degree", "seed", "samples", "max_iter", "capture_tol", "attractors", "unresolved", "wall_ms"}
    assert len(d["attractors"]) == 3
    assert set(d["attractors"][0]) == {"point", "count", "mean_iters"}
    assert sum(a["count"] for a in d["attractors"]) + d["unresolved"] == 100


def test_chunking_independent_of_sample_count(maps):
    """The first n labels do not depend on how many samples follow them."""
    small = basin_survey(maps[1], 5000, 3)
    big = basin_survey(maps[1], 9000, 3)
    A = attractor_array(1)
    X = sample_points(3, 0, 5000, 2)
    labels, _, _ = classify_points(maps[1], X, A, 5000, 1e-8)
    assert small.per_attractor_counts == [int((labels == a).sum()) for a in range(3)]
    assert all(b >= s for b, s in zip(big.per_attractor_counts, small.per_attractor_counts))


# -- expansion probe -----------------------------------------------------------

def test_seeded_growth_at_repelling_fixed_point(maps):
    seeds = np.array([[OMEGA, 1], [OMEGA.conjugate(), 1]])
    growth, mind = seeded_growth(maps[1], seeds, 40, period=1)
    np.testing.assert_allclose(growth, math.log(2), atol=1e-12)
    np.testing.assert_allclose(mind, 0.5)  # omega is equidistant from 0, 1 and infinity
    # short forward orbits stay on the fixed point at float resolution
    fwd, _ = seeded_growth(maps[1], seeds, 20)
    np.testing.assert_allclose(fwd, math.log(2), atol=1e-9)


def test_seeded_growth_rejects_non_periodic(maps):
    with pytest.raises(ValueError):
        seeded_growth(maps[1], np.array([[0.3 + 0.1j, 1]]), 10, period=1)


def test_orbit_through_superattractor_is_excluded(maps):
    X = np.array([[1.0, 1.0]], dtype=complex)
    growth, mind = orbit_growth(maps[1], X, 5)
    assert mind[0] == 0.0
    res = expansion_probe(maps[1], 200, 0, n_steps=40, delta=0.05)
    assert res.surviving_orbits <= 200


def test_probe_large_delta_is_empty(maps):
    for sampler in ("uniform", "backward"):
        res = expansion_probe(maps[1], 50, 0, n_steps=10, delta=0.9, sampler=sampler)
        assert res.empty and res.surviving_orbits == 0
        assert res.summary() == {"min": None, "median": None, "max": None}


def test_backward_chain_is_an_orbit(maps):
    chain, alive = backward_samples(maps[2], 4, 0, 20, depth=10)
    assert len(chain) == 11 and alive.all()
    for a, b in zip(chain, chain[1:]):
        assert np.all(chordal(evaluate_points(maps[2], a), b) < 1e-9)


@pytest.mark.parametrize("k", [1, 2])
def test_backward_probe_positive(maps, k):
    res = expansion_probe(maps[k], 200, 1, n_steps=40, delta=0.05, sampler="backward")
    assert res.surviving_orbits > 0
    assert min(res.growth_exponents) > 0
    assert res.failed_samples == 0


def test_probe_deterministic_across_threads(maps):
    # more samples than one chunk, so the work really is split across threads
    a = expansion_probe(maps[2], 5000, 9, n_steps=20, threads=1)
    b = expansion_probe(maps[2], 5000, 9, n_steps=20, threads=4)
    assert a == b


def test_surviving_orbits_respect_delta(maps):
    chain, alive = backward_samples(maps[1], 2, 0, 50, depth=80)
    segment = chain[:41]  # the probe measures the deepest n_steps segment
    cov = arrangement_covectors(1)
    d = np.min([critical_distance(c, cov) for c in segment], axis=0)
    res = expansion_probe(maps[1], 50, 2, n_steps=40, delta=0.26, sampler="backward")
    assert res.surviving_orbits == int(np.sum(alive & (d >= 0.26)))
    assert 0 < res.surviving_orbits < 50


def test_probe_rejects_bad_arguments(maps):
    with pytest.raises(ValueError):
        expansion_probe(maps[1], 10, 0, delta=0)
    with pytest.raises(ValueError):
        expansion_probe(maps[1], 10, 0, sampler="nope")
    with pytest.raises(ValueError):
        expansion_probe(maps[1], 10, 0, n_steps=10, depth=5)
