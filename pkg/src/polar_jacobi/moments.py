"""Moments of the Jacobi weight on [-1, 1] and the bilinear functional they define.

The monomial Gram matrix is badly conditioned (about 1e10 at degree 12), so
moments rounded to double precision already lose ~7 digits in an inner product
of orthogonal polynomials.  The table therefore keeps the normalised moments
mu_k / mu_0 in extended precision (mpmath) and sums inner products there; only
the total mass mu_0 and the final result are double precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import mpmath
import numpy as np

from . import poly_core as pc
from .errors import CapacityExceeded, RegimeError
from .jacobi import (
    JacobiParams,
    Regime,
    as_params,
    jacobi_eval,
    jacobi_poly,
    recurrence_coeffs,
    second_structure_coeffs,
    squared_norm,
    total_mass,
)
from .polar import PolarSpec, apply_operator, polar_poly

WORK_PREC = 200  # bits


@dataclass(frozen=True)
class MomentTable:
    """Moments mu_k = int z^k (1-z)^alpha (1+z)^beta dz, k = 0..capacity."""

    params: JacobiParams
    capacity: int
    mu0: complex
    normalized: tuple  # mpmath mpc values mu_k / mu_0

    @property
    def mu(self) -> np.ndarray:
        return np.array([complex(m) for m in self.normalized]) * self.mu0

    def __len__(self) -> int:
        return self.capacity + 1


def build_moments(params, K: int) -> MomentTable:
    """Moment table of capacity ``K`` by the three-term moment recurrence.

    Integration by parts against (1 - z^2) w gives
    (alpha+beta+k+2) mu_{k+1} = (beta-alpha) mu_k + k mu_{k-1}.
    """
    p = as_params(params)
    if p.regime is not Regime.STANDARD:
        raise RegimeError(
            f"moments need Re(alpha) > -1 and Re(beta) > -1, got {p.alpha}, {p.beta}"
        )
    if K < 0:
        raise ValueError("capacity must be nonnegative")
    with mpmath.workprec(WORK_PREC):
        a, b = mpmath.mpc(p.alpha), mpmath.mpc(p.beta)
        m = [mpmath.mpc(1)]
        prev = mpmath.mpc(0)
        for k in range(K):
            nxt = ((b - a) * m[k] + k * prev) / (a + b + k + 2)
            prev = m[k]
            m.append(nxt)
    return MomentTable(p, K, total_mass(p), tuple(m))


def _as_mp(p) -> list:
    if len(p) and isinstance(p[0], mpmath.mpc):
        return list(p)
    return [mpmath.mpc(c) for c in pc.as_poly(p)]


def inner_product(p, q, table: MomentTable) -> complex:
    """Bilinear form sum_{i,j} p_i q_j mu_{i+j} (no conjugation).

    ``p`` and ``q`` are coefficient arrays, or lists of mpmath numbers as
    produced by :func:`extended_polar_poly`.
    """
    with mpmath.workprec(WORK_PREC):
        pm = _as_mp(p)
        qm = _as_mp(q)
        if len(pm) == 0 or len(qm) == 0:
            return 0j
        need = len(pm) + len(qm) - 2
        if need > table.capacity:
            raise CapacityExceeded(f"need moments up to {need}, table holds {table.capacity}")
        acc = mpmath.mpc(0)
        for i, pi in enumerate(pm):
            row = mpmath.mpc(0)
            for j, qj in enumerate(qm):
                row += qj * table.normalized[i + j]
            acc += pi * row
        return complex(acc) * table.mu0


def _mp_recurrence(p: JacobiParams, n: int):
    """Extended-precision (beta_n, gamma_n), same cancelled forms as the double version.

    Coefficients rounded to double are not harmless here: P_k built from them
    is orthogonal to 1 only to O(eps), and <(z - xi) P_n, P_m> multiplies that
    defect by the possibly huge constant P_{n+1}^(alpha-1, beta-1)(xi).
    """
    recurrence_coeffs(p, n)  # raises DegenerateParams with the usual naming
    a, b = mpmath.mpc(p.alpha), mpmath.mpc(p.beta)
    s = a + b
    if p.symmetric:
        if n == 0:
            return mpmath.mpc(0), mpmath.mpc(0)
        if n == 1:
            return mpmath.mpc(0), 1 / (2 * a + 3)
        return mpmath.mpc(0), n * (n + 2 * a) / ((2 * a + 2 * n - 1) * (2 * a + 2 * n + 1))
    if n == 0:
        return (b - a) / (s + 2), mpmath.mpc(0)
    beta_n = (b * b - a * a) / ((s + 2 * n) * (s + 2 * n + 2))
    if n == 1:
        return beta_n, 4 * (a + 1) * (b + 1) / ((s + 2) ** 2 * (s + 3))
    gamma_n = 4 * n * (a + n) * (b + n) * (s + n) / (
        (s + 2 * n - 1) * (s + 2 * n) ** 2 * (s + 2 * n + 1)
    )
    return beta_n, gamma_n


def extended_jacobi_poly(params, n: int) -> list:
    """P_n^(alpha, beta) with coefficients and recurrence in extended precision."""
    p = as_params(params)
    with mpmath.workprec(WORK_PREC):
        prev, cur = [], [mpmath.mpc(1)]
        for k in range(n):
            bk, gk = _mp_recurrence(p, k)
            nxt = [mpmath.mpc(0)] + cur
            for i, c in enumerate(cur):
                nxt[i] -= bk * c
            for i, c in enumerate(prev):
                nxt[i] -= gk * c
            prev, cur = cur, nxt
        return cur


def extended_polar_poly(spec: PolarSpec) -> list:
    """P_n(z; alpha, beta; xi) as the divided difference of P_{n+1}^(alpha-1, beta-1), in extended precision.

    For |xi| > 1 the monomial coefficients of P_n grow like |xi|^n while the
    moments it is integrated against are O(1); double-precision coefficients
    then lose about log10(|xi|^n) digits in every inner product.
    """
    outer = extended_jacobi_poly(spec.shifted, spec.degree + 1)
    with mpmath.workprec(WORK_PREC):
        xi = mpmath.mpc(spec.pole)
        q = [mpmath.mpc(0)] * spec.degree + [outer[-1]]
        for k in range(spec.degree, 0, -1):
            q[k - 1] = outer[k] + xi * q[k]
        return q


def _mp_operator(P: list, xi: complex) -> list:
    """L_xi[P] = P + (z - xi) P' on an extended-precision coefficient list."""
    with mpmath.workprec(WORK_PREC):
        out = list(P)
        for k in range(1, len(P)):
            out[k] += k * P[k]
            out[k - 1] -= mpmath.mpc(xi) * k * P[k]
        return out


def _mp_mul_linear(P: list, xi: complex) -> list:
    with mpmath.workprec(WORK_PREC):
        out = [mpmath.mpc(0)] + list(P)
        for k, c in enumerate(P):
            out[k] -= mpmath.mpc(xi) * c
        return out


def _norm(params, n: int) -> float:
    return abs(squared_norm(params, n)) ** 0.5


def _rel(value: complex, expected: complex, scale: float) -> float:
    """Relative error against ``expected``; falls back to ``scale`` when it is 0."""
    ref = abs(expected) if expected != 0 else scale
    return abs(value - expected) / ref if ref > 0 else abs(value - expected)


class Theorem1Result(NamedTuple):
    residual_first: float
    case_label: Optional[str]
    residual_second: Optional[float]


def second_part_case(n: int, m: int) -> str:
    if m == 0:
        return "m=0"
    if m < n - 1:
        return "0<m<n-1"
    if m == n - 1:
        return "m=n-1"
    if m == n:
        return "m=n"
    if m == n + 1:
        return "m=n+1"
    return "m>n+1"


def verify_theorem1(
    spec: PolarSpec, m: int, table: Optional[MomentTable] = None, extended: bool = True
) -> Theorem1Result:
    """Check both orthogonality relations of a polar polynomial against P_m^(alpha, beta).

    First part: <P_n + (z - xi) P_n', P_m> = delta_nm (n+1) ||P_n||^2.  Zero
    cases are scaled by (n+1) ||P_n|| ||P_m||, the diagonal is relative.
    Second part (n > 1 only): <(z - xi) P_n, P_m> against its six-case table.
    Zero cases are scaled by the sizes of the terms of the expansion of
    (z - xi) P_n in the Jacobi basis; nonzero cases are relative.

    With ``extended`` (the default) the polynomials are built and multiplied
    in extended precision, so the residuals measure the identities rather
    than the conditioning of double-precision monomial coefficients.  Pass
    ``extended=False`` to check the double-precision construction; expect
    errors growing like eps * |xi|^n / ||P_n||^2 there.
    """
    n, xi, par = spec.degree, spec.pole, spec.params
    if m < 0:
        raise ValueError("m must be nonnegative")
    need = max(2 * n + 4, n + m + 1)
    if table is None or table.capacity < need:
        table = build_moments(par, need)

    if extended:
        P = extended_polar_poly(spec)
        Pm = extended_jacobi_poly(par, m)
        LP = _mp_operator(P, xi)
        zP = _mp_mul_linear(P, xi)
    else:
        P = polar_poly(spec)
        Pm = jacobi_poly(par, m)
        LP = apply_operator(P, xi)
        zP = pc.mul_linear(P, xi)
    norm_m = _norm(par, m)

    first = inner_product(LP, Pm, table)
    if m == n:
        r1 = _rel(first, (n + 1) * squared_norm(par, n), 0.0)
    else:
        r1 = abs(first) / ((n + 1) * _norm(par, n) * norm_m)

    if n <= 1:
        return Theorem1Result(r1, None, None)

    label = second_part_case(n, m)
    tb, tg = second_structure_coeffs(par, n)
    at_pole = jacobi_eval(spec.shifted, n + 1, xi)
    expected = {
        "m=0": -total_mass(par) * at_pole,
        "m=n-1": tg * squared_norm(par, n - 1),
        "m=n": tb * squared_norm(par, n),
        "m=n+1": squared_norm(par, n + 1),
    }.get(label, 0j)
    scale = norm_m * (
        _norm(par, n + 1)
        + abs(tb) * _norm(par, n)
        + abs(tg) * _norm(par, n - 1)
        + abs(at_pole) * _norm(par, 0)
    )
    second = inner_product(zP, Pm, table)
    if label in ("0<m<n-1", "m>n+1"):
        r2 = abs(second) / scale
    else:
        r2 = _rel(second, expected, scale)
    return Theorem1Result(r1, label, r2)
