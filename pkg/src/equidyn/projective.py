"""Points of P^k in exact-rational or complex floating-point form."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import HolomorphyViolationError, NumericOverflowError
from .polynomial import PolynomialMap, _norm

#: relative tie window when choosing the leading coordinate of a float point
TIE_TOL = 1e-12
#: two float points are projectively equal when their chordal distance is below this
PROJ_EQ_TOL = 1e-9


def canonicalize(X: np.ndarray) -> np.ndarray:
    """Canonical float representatives for the rows of ``X``.

    Each row is scaled so its sup-norm is 1 and the first coordinate whose
    modulus is within ``TIE_TOL`` of the maximum is real positive.
    """
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    mod = np.abs(X)
    mx = mod.max(axis=1)
    if np.any(mx == 0):
        raise ValueError("the zero vector is not a projective point")
    lead = np.argmax(mod >= (1.0 - TIE_TOL) * mx[:, None], axis=1)
    pivot = X[np.arange(len(X)), lead]
    out = X * (np.conj(pivot) / (np.abs(pivot) * mx))[:, None]
    out[np.arange(len(X)), lead] = np.abs(pivot) / mx
    return out


def leading_index(X: np.ndarray) -> np.ndarray:
    """Index of the coordinate used as the affine chart for each row."""
    mod = np.abs(np.atleast_2d(X))
    mx = mod.max(axis=1)
    return np.argmax(mod >= (1.0 - TIE_TOL) * mx[:, None], axis=1)


def chordal(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Fubini-Study chordal distance between matching rows (broadcasts)."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    Xn = X / np.linalg.norm(X, axis=-1)[..., None]
    Yn = Y / np.linalg.norm(Y, axis=-1)[..., None]
    # norm of the component of Yn orthogonal to Xn; avoids cancellation in 1 - |<x,y>|^2
    diff = Yn - np.sum(np.conj(Xn) * Yn, axis=-1)[..., None] * Xn
    return np.minimum(np.linalg.norm(diff, axis=-1), 1.0)


class ProjectivePoint:
    """A point ``[x_1 : ... : x_{k+1}]`` in canonical form.

    Exact points hold Fractions/ints with the first nonzero coordinate
    equal to 1; float points hold a read-only complex array normalized by
    :func:`canonicalize`.
    """

    __slots__ = ("coords", "exact")

    def __init__(self, coords, exact: bool | None = None):
        if exact is None:
            exact = all(isinstance(c, (int, Fraction)) for c in coords)
        if exact:
            vals = [Fraction(c) for c in coords]
            pivot = next((c for c in vals if c != 0), None)
            if pivot is None:
                raise ValueError("the zero vector is not a projective point")
            self.coords = tuple(_norm(c / pivot) for c in vals)
        else:
            arr = canonicalize(np.asarray(coords, dtype=complex))[0]
            if not np.all(np.isfinite(arr)):
                raise NumericOverflowError(f"non-finite coordinates {coords}")
            arr.flags.writeable = False
            self.coords = arr
        self.exact = exact

    @property
    def k(self) -> int:
        return len(self.coords) - 1

    @property
    def canonical(self) -> bool:
        return True

    def to_float(self) -> "ProjectivePoint":
        if not self.exact:
            return self
        return ProjectivePoint([complex(c) for c in self.coords], exact=False)

    def array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coords]) if self.exact else np.array(self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if len(self.coords) != len(other.coords):
            return False
        if self.exact and other.exact:
            return self.coords == other.coords
        return chordal_distance(self, other) < PROJ_EQ_TOL

    def __hash__(self):
        if self.exact:
            return hash(self.coords)
        raise TypeError("float projective points are compared with a tolerance and are unhashable")

    def __repr__(self):
        if self.exact:
            return "[" + ":".join(str(c) for c in self.coords) + "]"
        return "[" + ":".join(f"{c:.6g}" for c in self.coords) + "]"

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def chordal_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Fubini-Study chordal distance, in [0, 1]."""
    return float(chordal(p.array(), q.array()))


def evaluate_map(pmap: PolynomialMap, p: ProjectivePoint) -> ProjectivePoint:
    """Image of ``p`` under ``pmap``, in the same arithmetic mode as ``p``."""
    if p.k != pmap.k:
        raise ValueError(f"point in P^{p.k} but map on P^{pmap.k}")
    if p.exact:
        image = pmap.evaluate(p.coords)
        if all(c == 0 for c in image):
            raise HolomorphyViolationError(f"{pmap!r} has an indeterminacy point at {p!r}")
        return ProjectivePoint(image, exact=True)
    return ProjectivePoint(evaluate_points(pmap, p.array()[None, :])[0], exact=False)


def evaluate_points(pmap: PolynomialMap, X: np.ndarray) -> np.ndarray:
    """Vectorized float image of canonical rows ``X``, canonicalized."""
    Y = pmap.numeric(canonicalize(X))
    mx = np.abs(Y).max(axis=1)
    if np.any(mx == 0):
        raise HolomorphyViolationError("image vanished identically at a sample point")
    if not np.all(np.isfinite(Y)):
        raise NumericOverflowError("non-finite image during evaluation")
    return canonicalize(Y)


def projectively_equal_exact(a: Sequence, b: Sequence) -> bool:
    """Exact projective equality of two coordinate vectors (rank-1 test)."""
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(i + 1, n))
