"""Dense complex polynomials in the monomial basis.

A polynomial is a 1-D complex numpy array of coefficients, lowest power
first.  The zero polynomial is the empty array.  Trailing zeros are trimmed
only when they are exactly zero; no numerical trimming happens anywhere.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

HULL_EPS = 1e-9


def as_poly(coeffs) -> np.ndarray:
    """Copy ``coeffs`` into a trimmed complex coefficient array."""
    c = np.array(coeffs, dtype=complex).ravel()
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(0, dtype=complex)
    return c[: nz[-1] + 1]


def degree(p) -> int:
    """Degree of ``p``; the zero polynomial has degree -1."""
    return len(as_poly(p)) - 1


def evaluate(p, z):
    """Horner evaluation of ``p`` at ``z`` (scalar or array)."""
    p = np.asarray(p, dtype=complex)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def derivative(p) -> np.ndarray:
    p = as_poly(p)
    if len(p) <= 1:
        return np.zeros(0, dtype=complex)
    return as_poly(p[1:] * np.arange(1, len(p)))


def add(p, q) -> np.ndarray:
    p = as_poly(p)
    q = as_poly(q)
    out = np.zeros(max(len(p), len(q)), dtype=complex)
    out[: len(p)] += p
    out[: len(q)] += q
    return as_poly(out)


def scale(p, c) -> np.ndarray:
    return as_poly(as_poly(p) * complex(c))


def mul_linear(p, xi) -> np.ndarray:
    """Return (z - xi) * p(z)."""
    p = as_poly(p)
    if len(p) == 0:
        return p
    out = np.zeros(len(p) + 1, dtype=complex)
    out[1:] += p
    out[:-1] -= complex(xi) * p
    return as_poly(out)


def synthetic_division(p, xi):
    """Divide ``p`` by (z - xi); return (quotient, remainder)."""
    p = as_poly(p)
    if len(p) == 0:
        return p, 0j
    xi = complex(xi)
    q = np.zeros(len(p) - 1, dtype=complex)
    acc = 0j
    for k in range(len(p) - 1, 0, -1):
        acc = p[k] + acc * xi
        q[k - 1] = acc
    rem = p[0] + acc * xi
    return as_poly(q), rem


def divided_difference(p, xi) -> np.ndarray:
    """Quotient (p(z) - p(xi)) / (z - xi), of degree deg(p) - 1.

    The remainder is dropped: subtracting p(xi) makes it zero in exact
    arithmetic, and the quotient does not depend on the constant term.
    """
    p = as_poly(p)
    if len(p) == 0:
        raise ValueError("divided difference of the zero polynomial")
    q, _ = synthetic_division(p, xi)
    return q


def from_roots(roots: Iterable[complex]) -> np.ndarray:
    """Monic polynomial with the given roots, expanded by repeated mul_linear."""
    p = np.ones(1, dtype=complex)
    for r in roots:
        p = mul_linear(p, r)
    return p


def reflect(p) -> np.ndarray:
    """Coefficients of p(-z)."""
    p = as_poly(p)
    return p * (-1.0) ** np.arange(len(p))


def coeff_residual(p, q) -> float:
    """Normwise relative coefficient distance max|p_k - q_k| / max|q_k|.

    Falls back to the absolute distance when ``q`` is the zero polynomial.
    """
    p = as_poly(p)
    q = as_poly(q)
    n = max(len(p), len(q))
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[: len(p)] = p
    b[: len(q)] = q
    diff = float(np.max(np.abs(a - b))) if n else 0.0
    ref = float(np.max(np.abs(b))) if n else 0.0
    return diff / ref if ref > 0 else diff


# ---------------------------------------------------------------------------
# planar convex hull

def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points: Sequence[complex]) -> list[complex]:
    """Counterclockwise hull vertices (monotone chain).

    Collinear boundary points are dropped.  The first vertex is the
    lexicographically smallest point, so the output does not depend on the
    input order.
    """
    pts = sorted({(complex(z).real, complex(z).imag) for z in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    pts = [complex(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts

    lower: list[complex] = []
    for z in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], z) <= 0:
            lower.pop()
        lower.append(z)
    upper: list[complex] = []
    for z in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], z) <= 0:
            upper.pop()
        upper.append(z)
    hull = lower[:-1] + upper[:-1]
    return hull


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    length = abs(d)
    if length == 0:
        return abs(z - a)
    u = d / length  # unit direction; |d|**2 would underflow for tiny segments
    t = min(length, max(0.0, ((z - a) * u.conjugate()).real))
    return abs(z - (a + t * u))


def hull_distance(hull: Sequence[complex], z: complex) -> float:
    """Distance from ``z`` to the hull polygon; 0 for interior points."""
    z = complex(z)
    n = len(hull)
    if n == 1:
        return abs(z - hull[0])
    edges = [(hull[i], hull[(i + 1) % n]) for i in range(n)]
    boundary = min(_segment_distance(z, a, b) for a, b in edges)
    if n >= 3 and all(_cross(a, b, z) >= 0 for a, b in edges):
        return 0.0
    return boundary


def in_hull(hull: Sequence[complex], z: complex, eps: float = HULL_EPS) -> bool:
    """True when ``z`` lies in the hull or within ``eps`` of it."""
    return hull_distance(hull, z) <= eps


def max_abs_root_bound(p) -> float:
    """Fujiwara bound on the moduli of the roots of ``p``."""
    p = as_poly(p)
    n = len(p) - 1
    if n < 1:
        return 0.0
    lead = p[-1]
    terms = []
    for k in range(1, n + 1):
        c = abs(p[n - k] / lead)
        if k == n:
            c /= 2.0
        terms.append(c ** (1.0 / k) if c > 0 else 0.0)
    return 2.0 * max(terms)


def is_finite_point(z) -> bool:
    z = complex(z)
    return math.isfinite(z.real) and math.isfinite(z.imag)


def shift_up(p, k: int = 1) -> np.ndarray:
    """Multiply by z**k."""
    p = as_poly(p)
    if len(p) == 0:
        return p
    return np.concatenate([np.zeros(k, dtype=complex), p])


def identity_residual(lhs_terms, rhs_terms, componentwise: bool = False) -> float:
    """Relative residual of ``sum(lhs_terms) == sum(rhs_terms)``.

    Terms should be passed un-cancelled (e.g. ``[p, z*p', -xi*p']`` rather
    than their sum) so the scale reflects the magnitudes actually added.
    Normwise: max_k |r_k| / max over terms and k of |t_k|.
    Componentwise: max_k |r_k| / sum_t |t_k|, over k where the sum is nonzero.
    """
    terms = [as_poly(t) for t in list(lhs_terms) + list(rhs_terms)]
    n = max((len(t) for t in terms), default=0)
    if n == 0:
        return 0.0
    mags = np.zeros(n)
    resid = np.zeros(n, dtype=complex)
    for i, t in enumerate(terms):
        sign = 1 if i < len(lhs_terms) else -1
        resid[: len(t)] += sign * t
        if componentwise:
            mags[: len(t)] += np.abs(t)
        elif len(t):
            mags[0] = max(mags[0], float(np.max(np.abs(t))))
    if componentwise:
        mask = mags > 0
        if not mask.any():
            return float(np.max(np.abs(resid)))
        return float(np.max(np.abs(resid[mask]) / mags[mask]))
    err = float(np.max(np.abs(resid)))
    return err / mags[0] if mags[0] > 0 else err
