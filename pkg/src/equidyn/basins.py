"""Monte Carlo basin classification and the expansion probe.

Both surveys are data-parallel over samples.  Sample ``i`` draws its
coordinates from its own generator seeded with ``(seed, i)``, and work is
split into fixed-size chunks, so results do not depend on the number of
threads.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import arrangement_covectors, chart_derivatives, critical_distance
from .polynomial import PolynomialMap
from .projective import PROJ_EQ_TOL, ProjectivePoint, canonicalize, chordal, evaluate_points, leading_index
from .symmetry import enumerate_superattractors

CHUNK = 4096
#: chordal distances below this are roundoff; a capture needs no further decrease
ROUNDOFF_FLOOR = 1e-14

UNRESOLVED = -1


@dataclass(frozen=True)
class BasinLabel:
    """``attractor`` is None for an unresolved point.

    ``reason`` is ``"captured"``, ``"max_iter"`` or ``"stalled"`` (the orbit
    sat on a non-attracting fixed point at float resolution).
    """

    attractor: int | None
    iterations: int
    reason: str

    @property
    def captured(self) -> bool:
        return self.attractor is not None


def attractor_array(k: int) -> np.ndarray:
    return canonicalize(np.array([p.array() for p in enumerate_superattractors(k)]))


def classify_points(
    pmap: PolynomialMap,
    X: np.ndarray,
    attractors: np.ndarray,
    max_iter: int,
    capture_tol: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized basin classification.

    Returns ``(labels, iterations, stalled)``.  A point is captured by
    attractor ``a`` at step ``n`` when ``g^n(x)`` is within ``capture_tol``
    of ``a`` and ``g^{n+1}(x)`` is strictly closer (or within roundoff of ``a``).  A
    point whose next iterate moves by less than ``min(capture_tol, 1e-9)``
    away from every attractor is a non-attracting fixed point at float
    resolution and is left unresolved immediately.
    """
    X = canonicalize(X)
    N = len(X)
    labels = np.full(N, UNRESOLVED, dtype=np.int64)
    iters = np.full(N, max_iter, dtype=np.int64)
    stalled = np.zeros(N, dtype=bool)
    active = np.arange(N)
    stall_tol = min(capture_tol, PROJ_EQ_TOL)
    A = np.asarray(attractors)
    for step in range(max_iter + 1):
        if active.size == 0:
            break
        Xa = X[active]
        D = chordal(Xa[:, None, :], A[None, :, :])
        idx = np.argmin(D, axis=1)
        d = D[np.arange(len(active)), idx]
        Y = evaluate_points(pmap, Xa)
        near = d < capture_tol
        dnext = chordal(Y, A[idx])
        captured = near & ((dnext < d) | (dnext <= ROUNDOFF_FLOOR))
        stuck = ~near & (chordal(Y, Xa) < stall_tol)
        labels[active[captured]] = idx[captured]
        iters[active[captured]] = step
        stalled[active[stuck]] = True
        iters[active[stuck]] = step
        keep = ~(captured | stuck)
        X[active[keep]] = Y[keep]
        active = active[keep]
    return labels, iters, stalled


def classify_basin(
    pmap: PolynomialMap,
    p: ProjectivePoint,
    attractors: list[ProjectivePoint] | None = None,
    max_iter: int = 5000,
    capture_tol: float = 1e-8,
) -> BasinLabel:
    if attractors is None:
        A = attractor_array(pmap.k)
    else:
        A = canonicalize(np.array([a.array() for a in attractors]))
    labels, iters, stalled = classify_points(pmap, p.array()[None, :], A, max_iter, capture_tol)
    if labels[0] != UNRESOLVED:
        return BasinLabel(int(labels[0]), int(iters[0]), "captured")
    return BasinLabel(None, int(iters[0]), "stalled" if stalled[0] else "max_iter")


def sample_points(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Fubini-Study uniform samples ``start..stop-1``, one generator per index."""
    out = np.empty((stop - start, n), dtype=complex)
    for row, i in enumerate(range(start, stop)):
        z = np.random.default_rng([seed, i]).standard_normal(2 * n)
        out[row] = z[:n] + 1j * z[n:]
    return canonicalize(out) if len(out) else out


def _chunks(total: int, size: int = CHUNK):
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _run_chunks(fn, total, threads):
    chunks = _chunks(total)
    if threads <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


@dataclass
class BasinReport:
    k: int
    degree: int
    sample_count: int
    seed: int
    max_iter: int
    capture_tol: float
    attractors: list
    per_attractor_counts: list
    per_attractor_mean_iterations: list
    unresolved_count: int
    stalled_count: int
    mean_capture_iterations: float
    wall_time: float = field(default=0.0, compare=False)

    @property
    def resolved_fraction(self) -> float:
        if self.sample_count == 0:
            return 1.0
        return 1.0 - self.unresolved_count / self.sample_count

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "degree": self.degree,
            "seed": self.seed,
            "samples": self.sample_count,
            "max_iter": self.max_iter,
            "capture_tol": self.capture_tol,
            "attractors": [
                {"point": [int(c) for c in p.coords], "count": c, "mean_iters": m}
                for p, c, m in zip(self.attractors, self.per_attractor_counts, self.per_attractor_mean_iterations)
            ],
            "unresolved": self.unresolved_count,
            "wall_ms": round(self.wall_time * 1000.0, 3),
        }


def basin_survey(
    pmap: PolynomialMap,
    sample_count: int,
    seed: int,
    max_iter: int = 5000,
    capture_tol: float = 1e-8,
    threads: int = 1,
) -> BasinReport:
    """Classify ``sample_count`` Fubini-Study uniform points of P^k."""
    t0 = time.perf_counter()
    k = pmap.k
    pts = enumerate_superattractors(k)
    A = attractor_array(k)

    def work(chunk):
        X = sample_points(seed, chunk[0], chunk[1], k + 1)
        return classify_points(pmap, X, A, max_iter, capture_tol)

    results = _run_chunks(work, sample_count, threads)
    if results:
        labels = np.concatenate([r[0] for r in results])
        iters = np.concatenate([r[1] for r in results])
        stalled = np.concatenate([r[2] for r in results])
    else:
        labels = iters = np.zeros(0, dtype=np.int64)
        stalled = np.zeros(0, dtype=bool)
    counts, means = [], []
    for a in range(len(pts)):
        mask = labels == a
        c = int(mask.sum())
        counts.append(c)
        means.append(float(iters[mask].sum()) / c if c else 0.0)
    captured = labels != UNRESOLVED
    n_cap = int(captured.sum())
    return BasinReport(
        k=k,
        degree=pmap.degree,
        sample_count=sample_count,
        seed=seed,
        max_iter=max_iter,
        capture_tol=capture_tol,
        attractors=pts,
        per_attractor_counts=counts,
        per_attractor_mean_iterations=means,
        unresolved_count=int(sample_count - n_cap),
        stalled_count=int(stalled.sum()),
        mean_capture_iterations=float(iters[captured].sum()) / n_cap if n_cap else 0.0,
        wall_time=time.perf_counter() - t0,
    )


# -- expansion probe -----------------------------------------------------------

def orbit_growth(pmap: PolynomialMap, X: np.ndarray, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Growth exponents and min critical distances along forward orbits of ``X``.

    The exponent is ``(1/n) log sigma_min`` of the product of chart
    derivatives along the orbit; the product is rescaled each step and the
    scale kept in log form.  The critical distance is the minimum over the
    points ``x_0 .. x_n``.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    chain = [canonicalize(X)]
    for _ in range(n_steps):
        chain.append(evaluate_points(pmap, chain[-1]))
    return chain_growth(pmap, chain)


def chain_growth(pmap: PolynomialMap, chain: list) -> tuple[np.ndarray, np.ndarray]:
    """Growth exponents along a given orbit ``chain[t+1] ~ g(chain[t])``."""
    n_steps = len(chain) - 1
    N, n = chain[0].shape
    cov = arrangement_covectors(pmap.k)
    mind = critical_distance(chain[0], cov)
    P = np.broadcast_to(np.eye(n - 1, dtype=complex), (N, n - 1, n - 1)).copy()
    logscale = np.zeros(N)
    for t in range(n_steps):
        M = chart_derivatives(pmap, chain[t], image_charts=leading_index(chain[t + 1]))
        P = M @ P
        s = np.linalg.norm(P, axis=(1, 2))
        s = np.where(s > 0, s, 1.0)
        P /= s[:, None, None]
        logscale += np.log(s)
        mind = np.minimum(mind, critical_distance(chain[t + 1], cov))
    with np.errstate(divide="ignore"):
        smin = np.linalg.svd(P, compute_uv=False)[:, -1]
        growth = (np.log(smin) + logscale) / n_steps
    return growth, mind


def seeded_growth(
    pmap: PolynomialMap, seeds: np.ndarray, n_steps: int, period: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Growth exponents of orbits started at ``seeds``.

    With ``period=None`` the orbit is iterated forward in floating point.
    Near a repelling cycle that orbit drifts away (roundoff is amplified by
    the multiplier each step), so when the seeds are known periodic points
    pass ``period``: each seed must return to itself within 1e-9 after
    ``period`` steps, and derivatives are then taken along the cycle
    repeated ``n_steps`` times.
    """
    X = canonicalize(seeds)
    if period is None:
        return orbit_growth(pmap, X, n_steps)
    if period < 1:
        raise ValueError("period must be positive")
    cycle = [X]
    for _ in range(period):
        cycle.append(evaluate_points(pmap, cycle[-1]))
    miss = chordal(cycle[-1], X)
    if np.any(miss >= PROJ_EQ_TOL):
        raise ValueError(f"seeds are not periodic with period {period} (max miss {miss.max():.3g})")
    cycle = cycle[:-1]
    chain = [cycle[t % period] for t in range(n_steps + 1)]
    return chain_growth(pmap, chain)


@dataclass
class ExpansionProbeResult:
    k: int
    delta: float
    n_steps: int
    sample_count: int
    seed: int
    surviving_orbits: int
    growth_exponents: list
    sampler: str = "uniform"
    failed_samples: int = 0
    wall_time: float = field(default=0.0, compare=False)

    @property
    def empty(self) -> bool:
        return self.surviving_orbits == 0

    def summary(self) -> dict:
        g = np.array(self.growth_exponents, dtype=float)
        return {
            "min": float(g.min()) if g.size else None,
            "median": float(np.median(g)) if g.size else None,
            "max": float(g.max()) if g.size else None,
        }

    def to_json_dict(self, cap: int = 1000) -> dict:
        return {
            "k": self.k,
            "delta": self.delta,
            "n_steps": self.n_steps,
            "seed": self.seed,
            "samples": self.sample_count,
            "sampler": self.sampler,
            "failed_samples": self.failed_samples,
            "surviving": self.surviving_orbits,
            "empty": self.empty,
            "growth": self.summary(),
            "orbits": [float(x) for x in self.growth_exponents[:cap]],
            "wall_ms": round(self.wall_time * 1000.0, 3),
        }


def _preimage_step(pmap, Y, starts):
    """One Newton solve of ``g(x) ~ Y`` per row, from the given starting vectors.

    Uses the equations ``G_a(x) y_i - G_i(x) y_a = 0`` (a != i, with i the
    leading coordinate of y) plus the affine normalization ``<x0, x> = |x0|^2``.
    Returns canonical solutions and a convergence mask.
    """
    N, n = Y.shape
    num = pmap.numeric
    i = leading_index(Y)
    ar = np.arange(N)
    yi = Y[ar, i]
    c = np.conj(starts) / np.sum(np.abs(starts) ** 2, axis=1)[:, None]
    X = starts.copy()
    ok = np.zeros(N, dtype=bool)
    for _ in range(60):
        G = num(X)
        D = num.jacobian(X)
        F = G * yi[:, None] - G[ar, i][:, None] * Y
        J = D * yi[:, None, None] - D[ar, i, :][:, None, :] * Y[:, :, None]
        # row i of F is identically zero; replace it by the normalization
        F[ar, i] = np.sum(c * X, axis=1) - 1.0
        J[ar, i, :] = c
        scale = np.abs(G).max(axis=1) + 1e-300
        with np.errstate(all="ignore"):
            try:
                step = np.linalg.solve(J, F[:, :, None])[:, :, 0]
            except np.linalg.LinAlgError:
                step = np.stack([np.linalg.lstsq(J[r], F[r], rcond=None)[0] for r in range(N)])
        X = X - step
        good = np.all(np.isfinite(X), axis=1)
        X[~good] = starts[~good]
        ok = good & (np.linalg.norm(step, axis=1) <= 1e-14 * np.linalg.norm(X, axis=1)) & (
            np.abs(F).max(axis=1) <= 1e-12 * np.maximum(scale, 1.0)
        )
        if ok.all():
            break
    Xc = canonicalize(np.where(ok[:, None], X, 1.0))
    with np.errstate(all="ignore"):
        ok &= chordal(evaluate_points(pmap, Xc), Y) < 1e-10
    return Xc, ok


def backward_samples(
    pmap: PolynomialMap, seed: int, start: int, stop: int, depth: int, tries: int = 6
) -> tuple[list, np.ndarray]:
    """Backward orbits ``x_{-depth}, ..., x_0`` of uniform samples, via random inverse branches.

    Each backward step runs Newton from random starting vectors drawn from
    the sample's own generator; the branch reached is whichever root the
    start converges to.  Deep preimages accumulate on the Julia set, so
    their forward orbits are the natural candidates for orbits that avoid
    the critical set.  Newton preimages are well conditioned, unlike
    forward iteration near the Julia set, so the chain itself serves as the
    orbit.  Returns the chain (deepest point first) and a mask of samples
    for which every step converged.
    """
    n = pmap.k + 1
    N = stop - start
    Y = sample_points(seed, start, stop, n)
    gens = [np.random.default_rng([seed, i, 1]) for i in range(start, stop)]
    alive = np.ones(N, dtype=bool)
    chain = [Y]
    for _ in range(depth):
        todo = alive.copy()
        Xnew = Y.copy()
        for _ in range(tries):
            if not todo.any():
                break
            rows = np.flatnonzero(todo)
            z = np.stack([gens[r].standard_normal(2 * n) for r in rows])
            starts = z[:, :n] + 1j * z[:, n:]
            Xs, ok = _preimage_step(pmap, Y[rows], starts)
            Xnew[rows[ok]] = Xs[ok]
            todo[rows[ok]] = False
        alive &= ~todo
        Y = Xnew
        chain.append(Y)
    return chain[::-1], alive


def expansion_probe(
    pmap: PolynomialMap,
    sample_count: int,
    seed: int,
    n_steps: int = 40,
    delta: float = 0.05,
    threads: int = 1,
    sampler: str = "uniform",
    depth: int | None = None,
) -> ExpansionProbeResult:
    """Growth exponents of sampled orbits that stay ``delta`` away from the critical set.

    ``sampler="uniform"`` draws Fubini-Study uniform starting points.
    Almost every such orbit falls into a superattracting basin, which lies
    on the critical set, so few or none survive.  ``sampler="backward"``
    builds backward orbits of depth ``depth`` (default ``2 * n_steps``) and
    measures growth along their deepest ``n_steps`` segment, which lies
    near the Julia set.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if sampler not in ("uniform", "backward"):
        raise ValueError(f"unknown sampler {sampler!r}")
    if depth is None:
        depth = 2 * n_steps
    if depth < n_steps:
        raise ValueError("depth must be at least n_steps")
    t0 = time.perf_counter()
    n = pmap.k + 1

    def work(chunk):
        if sampler == "uniform":
            X = sample_points(seed, chunk[0], chunk[1], n)
            alive = np.ones(len(X), dtype=bool)
            growth, mind = orbit_growth(pmap, X, n_steps)
        else:
            chain, alive = backward_samples(pmap, seed, chunk[0], chunk[1], depth)
            growth, mind = chain_growth(pmap, chain[: n_steps + 1])
        return growth[alive & (mind >= delta)], int((~alive).sum())

    parts = _run_chunks(work, sample_count, threads)
    growth = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    return ExpansionProbeResult(
        k=pmap.k,
        delta=delta,
        n_steps=n_steps,
        sample_count=sample_count,
        seed=seed,
        surviving_orbits=int(growth.size),
        growth_exponents=growth.tolist(),
        sampler=sampler,
        failed_samples=sum(p[1] for p in parts),
        wall_time=time.perf_counter() - t0,
    )
