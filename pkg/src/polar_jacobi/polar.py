"""Polar Jacobi polynomials P_n(z; alpha, beta; xi).

P_n is the monic polynomial of degree n with

    P_n(z) + (z - xi) P_n'(z) = (n + 1) P_n^(alpha, beta)(z),

equivalently (z - xi) P_n(z) = P_{n+1}^(alpha-1, beta-1)(z) - P_{n+1}^(alpha-1, beta-1)(xi).
Two independent constructions are provided: the inhomogeneous three-term
recurrence and the divided difference of the shifted Jacobi polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import poly_core as pc
from .errors import DegenerateParams
from .jacobi import (
    JacobiParams,
    _check_degree,
    as_params,
    jacobi_eval,
    jacobi_poly,
    ratio,
    second_structure_coeffs,
)

MONIC_DRIFT = 1e-12


@dataclass(frozen=True)
class PolarSpec:
    params: JacobiParams
    pole: complex
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "params", as_params(self.params))
        pole = complex(self.pole)
        if not pc.is_finite_point(pole):
            raise ValueError("pole must be finite")
        object.__setattr__(self, "pole", pole)
        _check_degree(self.degree)

    @classmethod
    def of(cls, alpha, beta, xi, n: int) -> "PolarSpec":
        return cls(JacobiParams(alpha, beta), xi, n)

    @property
    def alpha(self) -> complex:
        return self.params.alpha

    @property
    def beta(self) -> complex:
        return self.params.beta

    @property
    def shifted(self) -> JacobiParams:
        """Parameters (alpha - 1, beta - 1) of the family carrying the level curve."""
        return self.params.shifted(-1)

    def with_degree(self, n: int) -> "PolarSpec":
        return PolarSpec(self.params, self.pole, n)

    def mirrored(self) -> "PolarSpec":
        """The spec (beta, alpha, -xi) related by z -> -z."""
        return PolarSpec(self.params.swapped(), -self.pole, self.degree)


class PolarRecurrencePair(NamedTuple):
    a: complex
    b: complex


def polar_a(params, n: int) -> complex:
    p = as_params(params)
    _check_degree(n)
    if p.symmetric:
        return 0j
    al, be = p.alpha, p.beta
    s = al + be
    return ratio(
        (s - 2) * (al - be),
        [(f"alpha+beta+{2 * n}", s + 2 * n, 1), (f"alpha+beta+{2 * n + 2}", s + 2 * n + 2, 1)],
        n, p,
    )


def polar_b(params, n: int) -> complex:
    p = as_params(params)
    _check_degree(n)
    al, be = p.alpha, p.beta
    s = al + be
    if p.symmetric:
        # polar ultraspherical form; at n = 0 (2alpha-1) cancels
        if n == 0:
            return ratio(-1, [("2alpha+1", 2 * al + 1, 1)], n, p)
        return ratio(
            -(n + 1) * (2 * al + n - 1),
            [
                (f"2alpha+{2 * n - 1}", 2 * al + 2 * n - 1, 1),
                (f"2alpha+{2 * n + 1}", 2 * al + 2 * n + 1, 1),
            ],
            n, p,
        )
    if n == 0:
        # (alpha+beta+n-1) cancels against (alpha+beta+2n-1)
        return ratio(-4 * al * be, [("alpha+beta", s, 2), ("alpha+beta+1", s + 1, 1)], n, p)
    return ratio(
        -4 * (n + 1) * (al + n) * (be + n) * (s + n - 1),
        [
            (f"alpha+beta+{2 * n - 1}", s + 2 * n - 1, 1),
            (f"alpha+beta+{2 * n}", s + 2 * n, 2),
            (f"alpha+beta+{2 * n + 1}", s + 2 * n + 1, 1),
        ],
        n, p,
    )


def polar_recurrence_coeffs(params, n: int) -> PolarRecurrencePair:
    """Coefficients a_n, b_n of
    P_{n+1} = (z + a_n) P_n + b_n P_{n-1} + P_{n+1}^(alpha-1, beta-1)(xi).
    """
    return PolarRecurrencePair(polar_a(params, n), polar_b(params, n))


def _assert_monic(p: np.ndarray, n: int) -> np.ndarray:
    if len(p) != n + 1 or abs(p[-1] - 1) > MONIC_DRIFT:
        raise ArithmeticError(
            f"polar polynomial lost monic normalisation: degree {len(p) - 1}, lead {p[-1]!r}"
        )
    return p


def polar_poly_recurrence(spec: PolarSpec) -> np.ndarray:
    """Build P_n by the inhomogeneous three-term recurrence.

    The inhomogeneous term P_{k+1}^(alpha-1, beta-1)(xi) is evaluated in value
    space at each step, never from expanded coefficients.
    """
    n, xi = spec.degree, spec.pole
    prev = np.zeros(0, dtype=complex)
    cur = np.ones(1, dtype=complex)
    shift = spec.shifted
    for k in range(n):
        nxt = np.zeros(k + 2, dtype=complex)
        nxt[1:] += cur
        nxt[:-1] += polar_a(spec.params, k) * cur
        if k:
            # b_0 multiplies P_{-1} = 0 and is never needed
            nxt[: len(prev)] += polar_b(spec.params, k) * prev
        nxt[0] += jacobi_eval(shift, k + 1, xi)
        prev, cur = cur, nxt
    return _assert_monic(cur, n)


def polar_poly_divdiff(spec: PolarSpec) -> np.ndarray:
    """Build P_n as (P_{n+1}^(a-1,b-1)(z) - P_{n+1}^(a-1,b-1)(xi)) / (z - xi)."""
    shifted = jacobi_poly(spec.shifted, spec.degree + 1)
    return _assert_monic(pc.divided_difference(shifted, spec.pole), spec.degree)


def factorization_applies(spec: PolarSpec) -> Optional[tuple[int, complex, str]]:
    """Match a spec against the negative-integer factorisations.

    Returns ``(k, other, side)`` when alpha = -k with xi = 1 (side "minus")
    or beta = -k with xi = -1 (side "plus") and k <= n, else None.
    """
    a, b, xi, n = spec.alpha, spec.beta, spec.pole, spec.degree
    for value, other, pole, side in ((a, b, 1, "minus"), (b, a, -1, "plus")):
        if xi == pole and value.imag == 0 and value.real < 0 and value.real == int(value.real):
            k = -int(value.real)
            if 1 <= k <= n:
                return k, other, side
    return None


def factored_polar_poly(k: int, other, n: int, side: str) -> np.ndarray:
    """Right-hand side of the negative-integer factorisation.

    side "minus":  P_{n+k}(z; -k, beta; 1)  = (z-1)^k P_n^(k+1, beta-1)(z)
    side "plus":   P_{n+k}(z; alpha, -k; -1) = (z+1)^k P_n^(alpha-1, k+1)(z)
    """
    if side == "minus":
        base = jacobi_poly(JacobiParams(k + 1, complex(other) - 1), n)
        root = 1.0
    elif side == "plus":
        base = jacobi_poly(JacobiParams(complex(other) - 1, k + 1), n)
        root = -1.0
    else:
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    out = base
    for _ in range(k):
        out = pc.mul_linear(out, root)
    return out


def polar_poly(spec: PolarSpec, method: str = "recurrence") -> np.ndarray:
    """P_n(z; alpha, beta; xi) by the chosen route.

    ``method`` is "recurrence", "divdiff" or "auto".  "auto" tries the
    recurrence, then the divided difference, then (for alpha = -k, xi = 1 or
    beta = -k, xi = -1) the factorised form, which stays finite when both
    recurrences hit a vanishing denominator.
    """
    if method == "recurrence":
        return polar_poly_recurrence(spec)
    if method == "divdiff":
        return polar_poly_divdiff(spec)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return polar_poly_route(spec)[0]


def polar_poly_route(spec: PolarSpec) -> tuple[np.ndarray, str]:
    """Like ``polar_poly(spec, "auto")`` but also names the route used."""
    try:
        return polar_poly_recurrence(spec), "recurrence"
    except DegenerateParams as first:
        try:
            return polar_poly_divdiff(spec), "divdiff"
        except DegenerateParams:
            match = factorization_applies(spec)
            if match is None:
                raise first
            k, other, side = match
            return factored_polar_poly(k, other, spec.degree - k, side), "factorization"


def polar_eval(spec: PolarSpec, z):
    """Value of P_n at ``z`` via the shifted Jacobi values (no expanded coefficients)."""
    z = np.asarray(z, dtype=complex)
    shift, xi, n = spec.shifted, spec.pole, spec.degree
    top = jacobi_eval(shift, n + 1, z) - jacobi_eval(shift, n + 1, xi)
    return top / (z - xi)


def sobolev_Q(spec: PolarSpec) -> np.ndarray:
    """Q_n(z) = (z - xi) P_{n-1}(z), the Sobolev-orthogonal polynomial of degree n."""
    n = spec.degree
    if n == 0:
        return np.ones(1, dtype=complex)
    return pc.mul_linear(polar_poly(spec.with_degree(n - 1)), spec.pole)


def apply_operator(p, xi) -> np.ndarray:
    """L_xi[p] = p + (z - xi) p'."""
    return pc.add(p, pc.mul_linear(pc.derivative(p), xi))


def operator_identity_residual(spec: PolarSpec, P=None, componentwise: bool = False) -> float:
    """Residual of P_n + (z - xi) P_n' = (n+1) P_n^(alpha, beta)."""
    if P is None:
        P = polar_poly(spec)
    dP = pc.derivative(P)
    lhs = [P, pc.shift_up(dP), pc.scale(dP, -spec.pole)]
    rhs = [pc.scale(jacobi_poly(spec.params, spec.degree), spec.degree + 1)]
    return pc.identity_residual(lhs, rhs, componentwise)


def structure_expansion_residual(spec: PolarSpec, P=None, componentwise: bool = False) -> float:
    """Residual of (z - xi) P_n = P_{n+1} + tb_n P_n + tg_n P_{n-1} - P_{n+1}^(a-1,b-1)(xi)."""
    n, xi, par = spec.degree, spec.pole, spec.params
    if P is None:
        P = polar_poly(spec)
    tb, tg = second_structure_coeffs(par, n)
    lhs = [pc.shift_up(P), pc.scale(P, -xi)]
    terms = [jacobi_poly(par, n + 1), pc.scale(jacobi_poly(par, n), tb)]
    if n >= 1:
        terms.append(pc.scale(jacobi_poly(par, n - 1), tg))
    terms.append(np.array([-jacobi_eval(spec.shifted, n + 1, xi)]))
    return pc.identity_residual(lhs, terms, componentwise)


def reflect_check(spec: PolarSpec) -> float:
    """Residual of P_n(z; a, b; xi) = (-1)^n P_n(-z; b, a; -xi)."""
    lhs = polar_poly(spec)
    other = polar_poly(spec.mirrored())
    rhs = pc.scale(pc.reflect(other), (-1) ** spec.degree)
    return pc.coeff_residual(lhs, rhs)


def dual_construction_residual(spec: PolarSpec) -> float:
    return pc.coeff_residual(polar_poly_divdiff(spec), polar_poly_recurrence(spec))


@dataclass
class FactorizationReport:
    """Residuals for the negative-integer factorisation family.

    Polynomial residuals are None when the left-hand side cannot be built
    by the recurrence (``lhs_degenerate`` then names the vanishing factor);
    shift residuals are None when n = 0.
    """

    k: int
    other: complex
    n: int
    side: str
    factorization: Optional[float] = None
    nested: Optional[float] = None
    a_shift: Optional[float] = None
    b_shift: Optional[float] = None
    lhs_degenerate: Optional[str] = None
    rhs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex), repr=False)

    @property
    def max_residual(self) -> float:
        vals = [v for v in (self.factorization, self.nested, self.a_shift, self.b_shift) if v is not None]
        return max(vals) if vals else 0.0


def _factorization_specs(k: int, other: complex, side: str):
    if side == "minus":
        return JacobiParams(-k, other), 1.0, JacobiParams(k + 2, other)
    if side == "plus":
        return JacobiParams(other, -k), -1.0, JacobiParams(other, k + 2)
    raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")


def factorization_check(k: int, other, n: int, side: str) -> FactorizationReport:
    """Check the factorisation for alpha = -k, xi = 1 ("minus") or beta = -k, xi = -1 ("plus").

    Besides the factorisation itself this checks the nested form
    (z -+ 1)^k ((z -+ 1) P_{n-1}(z; shifted; +-1) + P_n^(...)(+-1)) and the
    recurrence-coefficient shifts a_{n+k} = a_{n-1}, b_{n+k} = b_{n-1}.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    other = complex(other)
    lhs_params, pole, nested_params = _factorization_specs(k, other, side)
    rhs = factored_polar_poly(k, other, n, side)
    report = FactorizationReport(k, other, n, side, rhs=rhs)

    try:
        lhs = polar_poly_recurrence(PolarSpec(lhs_params, pole, n + k))
    except DegenerateParams as exc:
        report.lhs_degenerate = f"{exc.factor} at n={exc.index}"
    else:
        report.factorization = pc.coeff_residual(lhs, rhs)

    if n >= 1:
        inner = polar_poly_recurrence(PolarSpec(nested_params, pole, n - 1))
        base_params = JacobiParams(k + 1, other - 1) if side == "minus" else JacobiParams(other - 1, k + 1)
        nested = pc.mul_linear(inner, pole)
        nested = pc.add(nested, [jacobi_eval(base_params, n, pole)])
        for _ in range(k):
            nested = pc.mul_linear(nested, pole)
        report.nested = pc.coeff_residual(nested, rhs)

        lhs_c = polar_recurrence_coeffs(lhs_params, n + k)
        rhs_c = polar_recurrence_coeffs(nested_params, n - 1)
        report.a_shift = _scalar_residual(lhs_c.a, rhs_c.a)
        report.b_shift = _scalar_residual(lhs_c.b, rhs_c.b)
    return report


def _scalar_residual(x: complex, y: complex) -> float:
    ref = max(abs(x), abs(y))
    return abs(x - y) / ref if ref > 0 else 0.0
