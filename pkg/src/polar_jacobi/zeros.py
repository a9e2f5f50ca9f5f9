"""Polynomial roots and validators for where the zeros of polar polynomials lie."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import poly_core as pc
from .errors import DegreeZero, NoConvergence, PreconditionFailed
from .jacobi import Regime, jacobi_eval, phi
from .polar import PolarSpec

EPS = np.finfo(float).eps
MAX_SWEEPS = 200
# fixed irrational offset so that no initial guess sits on a symmetry axis
ANGLE_OFFSET = 0.5 * (math.sqrt(5) - 1)


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float


@dataclass
class ZeroSet:
    roots: list[Root]
    source_degree: int

    @property
    def locations(self) -> np.ndarray:
        return np.array([r.location for r in self.roots], dtype=complex)

    def expanded(self) -> np.ndarray:
        """All roots repeated by multiplicity."""
        return np.array([r.location for r in self.roots for _ in range(r.multiplicity)], dtype=complex)

    @property
    def max_multiplicity(self) -> int:
        return max((r.multiplicity for r in self.roots), default=0)


def _normalized(p) -> np.ndarray:
    p = pc.as_poly(p)
    return p / np.max(np.abs(p))


def root_residual(p, z: complex) -> float:
    """|p(z)| / (1+|z|)^deg with p scaled to unit max coefficient."""
    q = _normalized(p)
    return float(abs(pc.evaluate(q, z)) / (1 + abs(z)) ** (len(q) - 1))


def _horner_with_bound(p: np.ndarray, z: complex) -> tuple[complex, float]:
    """p(z) and a running bound on its rounding error."""
    acc = 0j
    err = 0.0
    az = abs(z)
    for c in p[::-1]:
        acc = acc * z + c
        err = err * az + abs(acc)
    return acc, 4 * EPS * err


def _aberth(p: np.ndarray, tol: float, max_sweeps: int) -> np.ndarray:
    n = len(p) - 1
    dp = pc.derivative(p)
    radius = 1 + max(1.0, pc.max_abs_root_bound(p))
    angles = 2 * np.pi * (np.arange(n) + ANGLE_OFFSET) / n
    z = radius * np.exp(1j * angles)
    done = np.zeros(n, dtype=bool)
    last = np.full(n, np.inf)
    for _ in range(max_sweeps):
        for i in np.flatnonzero(~done):
            zi = z[i]
            v, noise = _horner_with_bound(p, zi)
            if v == 0:
                done[i] = True
                continue
            ratio = v / pc.evaluate(dp, zi)
            diff = zi - np.delete(z, i)
            w = ratio / (1 - ratio * np.sum(1 / diff))
            if not np.isfinite(w):
                w = ratio
            step = abs(w)
            if step < tol * (1 + abs(zi)):
                z[i] = zi - w
                done[i] = True
            elif abs(v) <= noise and step >= 0.5 * last[i]:
                # value is rounding noise and the step stopped shrinking:
                # nothing more to gain (multiple roots end here)
                done[i] = True
            else:
                z[i] = zi - w
            last[i] = step
        if done.all():
            return z
    raise NoConvergence(
        f"Aberth iteration: {int((~done).sum())} of {n} roots unconverged after {max_sweeps} sweeps",
        best=z,
    )


def _link(z: np.ndarray, radius) -> list[list[int]]:
    """Single-linkage groups: i ~ j when |z_i - z_j| <= radius * max(1, |z_i|, |z_j|)."""
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radius * max(1.0, abs(z[i]), abs(z[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _pseudozero_radius(p: np.ndarray, c: complex, m: int) -> float:
    """How far rounding can split an m-fold root of ``p`` at ``c``.

    A relative coefficient perturbation eta moves an m-fold root by about
    (eta * sum|p_k||c|^k / |p^(m)(c)/m!|)^(1/m).
    """
    n = len(p) - 1
    d = p
    for _ in range(m):
        d = pc.derivative(d)
    top = abs(pc.evaluate(d, c)) / math.factorial(m)
    if top == 0:
        return math.inf
    size = pc.evaluate(np.abs(p), abs(c)).real
    return (n * EPS * size / top) ** (1.0 / m)


def _refine_multiple(p: np.ndarray, c: complex, m: int, spread: float) -> complex:
    """Newton on p^(m-1), whose root is simple at an m-fold root of p."""
    d = p
    for _ in range(m - 1):
        d = pc.derivative(d)
    dd = pc.derivative(d)
    z = c
    for _ in range(20):
        den = pc.evaluate(dd, z)
        if den == 0:
            break
        step = pc.evaluate(d, z) / den
        z = z - step
        if abs(step) <= 4 * EPS * max(1.0, abs(z)):
            break
    # keep the centroid if Newton wandered off the cluster
    return z if abs(z - c) <= max(spread, 1e-300) * 2 else c


def _cluster(p: np.ndarray, z: np.ndarray, tol: float) -> list[list[int]]:
    """Multiplicity groups.

    First pass: single linkage at 10 sqrt(tol), which covers double roots.
    Higher multiplicities split by eps^(1/m) and can exceed that radius, so
    a second pass proposes groups at 10 tol^(1/4) and merges one only when
    its spread fits inside ten pseudozero radii of an m-fold root.
    """
    groups = _link(z, 10 * math.sqrt(tol))
    merged = []
    for loose in _link(z, 10 * tol**0.25):
        inside = [g for g in groups if g[0] in loose]
        if len(inside) == 1:
            merged.append(inside[0])
            continue
        c = complex(np.mean(z[loose]))
        spread = float(np.max(np.abs(z[loose] - c)))
        if spread <= 10 * _pseudozero_radius(p, c, len(loose)):
            merged.append(loose)
        else:
            merged.extend(inside)
    return merged


def find_roots(p, tol: float = 1e-10, max_sweeps: int = MAX_SWEEPS) -> ZeroSet:
    """Roots of ``p`` by Aberth-Ehrlich iteration, clustered into multiplicities.

    Residuals use ``p`` scaled to unit max coefficient, so they are
    comparable across polynomials whose coefficients span many decades.
    """
    p = pc.as_poly(p)
    n = len(p) - 1
    if n < 1:
        raise DegreeZero("root finding needs degree >= 1")
    q = p / p[-1]
    z = _aberth(q, tol, max_sweeps)
    roots = []
    for group in _cluster(q, z, tol):
        loc = complex(np.mean(z[group]))
        if len(group) > 1:
            spread = float(np.max(np.abs(z[group] - loc)))
            loc = complex(_refine_multiple(q, loc, len(group), spread))
            if root_residual(p, loc) > tol:
                # close but distinct roots: merging would break the residual bound
                roots.extend(Root(complex(z[i]), 1, root_residual(p, z[i])) for i in group)
                continue
        roots.append(Root(loc, len(group), root_residual(p, loc)))
    roots.sort(key=lambda r: (r.location.real, r.location.imag))
    return ZeroSet(roots, n)


# ---------------------------------------------------------------------------
# validators

def polar_zeros(spec: PolarSpec, tol: float = 1e-10) -> ZeroSet:
    from .polar import polar_poly_route

    p, _ = polar_poly_route(spec)
    return find_roots(p, tol)


@dataclass(frozen=True)
class DiskCheck:
    radius: float
    max_excess: float

    @property
    def passed(self) -> bool:
        return self.max_excess <= 1e-8 * (1 + self.radius)


def disk_bound_check(zeros: ZeroSet, xi) -> DiskCheck:
    """Compare root moduli with the disk radius 2 + |xi|."""
    radius = 2 + abs(complex(xi))
    excess = max((abs(r.location) - radius for r in zeros.roots), default=0.0)
    return DiskCheck(radius, max(excess, 0.0))


def level_curve_residuals(zeros: ZeroSet, spec: PolarSpec) -> list[float]:
    """|P_{n+1}^(a-1,b-1)(z) - P_{n+1}^(a-1,b-1)(xi)| / (1 + |P_{n+1}^(a-1,b-1)(xi)|) per root."""
    n = spec.degree
    target = jacobi_eval(spec.shifted, n + 1, spec.pole)
    vals = jacobi_eval(spec.shifted, n + 1, zeros.locations)
    return [float(v) for v in np.abs(np.atleast_1d(vals) - target) / (1 + abs(target))]


@dataclass(frozen=True)
class MultiplicityAudit:
    verdict: Verdict
    offenders: tuple = ()
    max_multiplicity: int = 0


def multiplicity_audit(zeros: ZeroSet, spec: PolarSpec, eps: float = 1e-6) -> MultiplicityAudit:
    """Multiplicities at most 2, and double roots only on [-1, 1].

    Not applicable outside the standard regime, where higher multiplicities
    genuinely occur.
    """
    mmax = zeros.max_multiplicity
    if spec.params.regime is not Regime.STANDARD:
        return MultiplicityAudit(Verdict.NOT_APPLICABLE, (), mmax)
    bad = []
    for r in zeros.roots:
        z = r.location
        if r.multiplicity > 2:
            bad.append(r)
        elif r.multiplicity == 2 and (abs(z.imag) > eps or abs(z.real) > 1 + eps):
            bad.append(r)
    return MultiplicityAudit(Verdict.FAIL if bad else Verdict.PASS, tuple(bad), mmax)


def segment_distances(xi) -> tuple[float, float]:
    """(Delta, delta): largest and smallest distance from xi to [-1, 1]."""
    xi = complex(xi)
    big = max(abs(xi - 1), abs(xi + 1))
    if abs(xi.real) <= 1:
        small = abs(xi.imag)
    else:
        small = min(abs(xi - 1), abs(xi + 1))
    return big, small


def ellipse_exclusion_check(zeros: ZeroSet, xi, a: float, eps: float = 1e-8) -> bool:
    """Roots are simple and outside the ellipse |z+1| + |z-1| = 2a, 1 < a < delta."""
    _, small = segment_distances(xi)
    if small <= 1:
        raise PreconditionFailed(f"needs distance from xi to [-1, 1] above 1, got {small}")
    if not 1 < a < small:
        raise PreconditionFailed(f"ellipse parameter must lie in (1, {small}), got {a}")
    for r in zeros.roots:
        z = r.location
        if r.multiplicity != 1 or abs(z + 1) + abs(z - 1) < 2 * a - eps:
            return False
    return True


def _segment_distance(z: complex) -> float:
    return pc._segment_distance(z, -1 + 0j, 1 + 0j)


def _ellipse_distance(z: complex, rho: float, samples: int = 256) -> float:
    """Distance from z to {cosh(rho + i t)} by sampling then golden-section search."""

    def dist(t):
        return abs(z - np.cosh(rho + 1j * t))

    ts = 2 * np.pi * np.arange(samples) / samples
    d = np.abs(z - np.cosh(rho + 1j * ts))
    k = int(np.argmin(d))
    lo, hi = ts[k] - 2 * np.pi / samples, ts[k] + 2 * np.pi / samples
    g = 0.5 * (math.sqrt(5) - 1)
    c, e = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fe = dist(c), dist(e)
    for _ in range(80):
        if fc < fe:
            hi, e, fe = e, c, fc
            c = hi - g * (hi - lo)
            fc = dist(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + g * (hi - lo)
            fe = dist(e)
    return float(min(d[k], fc, fe))


def asymptotic_ellipse_distance(zeros: ZeroSet, xi) -> float:
    """Largest distance from a root to the union of [-1, 1] and the ellipse |phi(z)| = |phi(xi)|."""
    xi = complex(xi)
    if xi.imag == 0 and abs(xi.real) <= 1:
        raise PreconditionFailed("xi lies on [-1, 1]; the limit curve degenerates")
    rho = math.log(abs(phi(xi)))
    if rho <= 0:
        raise PreconditionFailed("xi lies on [-1, 1]; the limit curve degenerates")
    return max(
        (min(_segment_distance(r.location), _ellipse_distance(r.location, rho)) for r in zeros.roots),
        default=0.0,
    )


def gauss_lucas_check(p, tol: float = 1e-7) -> bool:
    """Every critical point of p lies in the convex hull of its roots (within ``tol``)."""
    p = pc.as_poly(p)
    if len(p) < 3:
        raise ValueError("Gauss-Lucas check needs degree >= 2")
    hull = pc.convex_hull(find_roots(p).locations)
    crit = find_roots(pc.derivative(p)).locations
    return all(pc.in_hull(hull, z, tol) for z in crit)


@dataclass
class GeometryReport:
    disk_radius: float
    max_excess: float
    Delta_xi: float
    delta_xi: float
    ellipse_parameter: Optional[float]
    level_curve_residuals: list[float] = field(default_factory=list)
    hull_ok: Optional[bool] = None


def geometry_report(spec: PolarSpec, zeros: Optional[ZeroSet] = None) -> GeometryReport:
    """All location data for one polar polynomial.

    ``ellipse_parameter`` is the midpoint of the admissible range (1, delta)
    when delta > 1, else None.  ``hull_ok`` is None below degree 2.
    """
    from .polar import polar_poly_route

    p, _ = polar_poly_route(spec)
    if zeros is None:
        zeros = find_roots(p)
    disk = disk_bound_check(zeros, spec.pole)
    big, small = segment_distances(spec.pole)
    return GeometryReport(
        disk_radius=disk.radius,
        max_excess=disk.max_excess,
        Delta_xi=big,
        delta_xi=small,
        ellipse_parameter=(1 + small) / 2 if small > 1 else None,
        level_curve_residuals=level_curve_residuals(zeros, spec),
        hull_ok=gauss_lucas_check(p) if spec.degree >= 2 else None,
    )
