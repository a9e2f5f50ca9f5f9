"""Monic Jacobi polynomials P_n^(alpha, beta) for complex parameters.

Coefficients come from the classical monic three-term recurrence

    P_{n+1}(z) = (z - beta_n) P_n(z) - gamma_n P_{n-1}(z),   P_0 = 1.

Every coefficient is evaluated as a product of named factors.  Two kinds of
cancellation are applied before any denominator is checked:

* factors that are identical as expressions at a given index
  (alpha+beta+n against alpha+beta+2n-1 at n = 1, the beta_0 numerator
  beta^2-alpha^2 against alpha+beta, factors of n at n = 0);
* on the symmetric line alpha == beta, the ultraspherical forms in which
  (alpha+n)(beta+n) cancels against (alpha+beta+2n)^2.

A denominator that still vanishes raises :class:`DegenerateParams`; no
limits are taken.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import (
    BranchAmbiguity,
    DegenerateParams,
    DegreeTooLarge,
    GammaPole,
    NearDegenerateWarning,
)
from . import poly_core as pc

MAX_DEGREE = 200
NEAR_DEGENERATE = 1e-6


class Regime(Enum):
    STANDARD = "standard"
    NONSTANDARD = "nonstandard"


@dataclass(frozen=True)
class JacobiParams:
    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (pc.is_finite_point(a) and pc.is_finite_point(b)):
            raise ValueError("Jacobi parameters must be finite")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def regime(self) -> Regime:
        if self.alpha.real > -1 and self.beta.real > -1:
            return Regime.STANDARD
        return Regime.NONSTANDARD

    @property
    def symmetric(self) -> bool:
        return self.alpha == self.beta

    def shifted(self, da: float, db: float | None = None) -> "JacobiParams":
        if db is None:
            db = da
        return JacobiParams(self.alpha + da, self.beta + db)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)


def as_params(params) -> JacobiParams:
    if isinstance(params, JacobiParams):
        return params
    alpha, beta = params
    return JacobiParams(alpha, beta)


class RecurrencePair(NamedTuple):
    beta: complex
    gamma: complex


class StructurePairs(NamedTuple):
    hat_beta: complex
    hat_gamma: complex
    tilde_beta: complex
    tilde_gamma: complex


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {n} exceeds the cap {MAX_DEGREE}")


def ratio(numerator: complex, denominators, n: int, params: JacobiParams) -> complex:
    """``numerator / prod(value**power)`` with named-denominator checks.

    ``denominators`` is a sequence of ``(name, value, power)``.  Factors are
    divided out one at a time so a tiny factor cannot underflow the product;
    a factor small enough to overflow the quotient counts as vanishing.
    """
    out = complex(numerator)
    for name, value, power in denominators:
        if value == 0:
            raise DegenerateParams(name, n, params.alpha, params.beta)
        if abs(value) < NEAR_DEGENERATE:
            warnings.warn(
                f"factor {name} = {value!r} is nearly zero at n={n}",
                NearDegenerateWarning,
                stacklevel=3,
            )
        for _ in range(power):
            out /= value
        if not pc.is_finite_point(out):
            raise DegenerateParams(name, n, params.alpha, params.beta)
    return out


def recurrence_coeffs(params, n: int) -> RecurrencePair:
    """Monic recurrence coefficients (beta_n, gamma_n)."""
    p = as_params(params)
    _check_degree(n)
    a, b = p.alpha, p.beta
    s = a + b
    if p.symmetric:
        beta_n = 0j
        if n == 0:
            gamma_n = 0j
        elif n == 1:
            gamma_n = ratio(1, [("2alpha+3", 2 * a + 3, 1)], n, p)
        else:
            gamma_n = ratio(
                n * (n + 2 * a),
                [("2alpha+2n-1", 2 * a + 2 * n - 1, 1), ("2alpha+2n+1", 2 * a + 2 * n + 1, 1)],
                n, p,
            )
        return RecurrencePair(beta_n, gamma_n)

    if n == 0:
        beta_n = ratio(b - a, [("alpha+beta+2", s + 2, 1)], n, p)
        return RecurrencePair(beta_n, 0j)
    beta_n = ratio(
        b * b - a * a,
        [(f"alpha+beta+{2 * n}", s + 2 * n, 1), (f"alpha+beta+{2 * n + 2}", s + 2 * n + 2, 1)],
        n, p,
    )
    if n == 1:
        gamma_n = ratio(
            4 * (a + 1) * (b + 1),
            [("alpha+beta+2", s + 2, 2), ("alpha+beta+3", s + 3, 1)],
            n, p,
        )
    else:
        gamma_n = ratio(
            4 * n * (a + n) * (b + n) * (s + n),
            [
                (f"alpha+beta+{2 * n - 1}", s + 2 * n - 1, 1),
                (f"alpha+beta+{2 * n}", s + 2 * n, 2),
                (f"alpha+beta+{2 * n + 1}", s + 2 * n + 1, 1),
            ],
            n, p,
        )
    return RecurrencePair(beta_n, gamma_n)


def first_structure_coeffs(params, n: int) -> tuple[complex, complex]:
    """(hat_beta_n, hat_gamma_n) of (1-z^2) P_n' = -n P_{n+1} + hat_beta P_n + hat_gamma P_{n-1}."""
    p = as_params(params)
    _check_degree(n)
    a, b = p.alpha, p.beta
    s = a + b
    if n == 0:
        return 0j, 0j
    if p.symmetric:
        if n == 1:
            return 0j, ratio(2 * a + 2, [("2alpha+3", 2 * a + 3, 1)], n, p)
        dens = [("2alpha+2n-1", 2 * a + 2 * n - 1, 1), ("2alpha+2n+1", 2 * a + 2 * n + 1, 1)]
        return 0j, ratio(n * (2 * a + n) * (2 * a + n + 1), dens, n, p)
    hat_beta = ratio(
        2 * n * (a - b) * (s + n + 1),
        [(f"alpha+beta+{2 * n}", s + 2 * n, 1), (f"alpha+beta+{2 * n + 2}", s + 2 * n + 2, 1)],
        n, p,
    )
    if n == 1:
        hat_gamma = ratio(
            4 * (a + 1) * (b + 1),
            [("alpha+beta+2", s + 2, 1), ("alpha+beta+3", s + 3, 1)],
            n, p,
        )
    else:
        hat_gamma = ratio(
            4 * n * (a + n) * (b + n) * (s + n) * (s + n + 1),
            [
                (f"alpha+beta+{2 * n - 1}", s + 2 * n - 1, 1),
                (f"alpha+beta+{2 * n}", s + 2 * n, 2),
                (f"alpha+beta+{2 * n + 1}", s + 2 * n + 1, 1),
            ],
            n, p,
        )
    return hat_beta, hat_gamma


def second_structure_coeffs(params, n: int) -> tuple[complex, complex]:
    """(tilde_beta_n, tilde_gamma_n) of
    P_{n+1}^(a-1, b-1) = P_{n+1} + tilde_beta P_n + tilde_gamma P_{n-1}."""
    p = as_params(params)
    _check_degree(n)
    a, b = p.alpha, p.beta
    s = a + b
    if p.symmetric:
        if n == 0:
            return 0j, 0j
        dens = [("2alpha+2n-1", 2 * a + 2 * n - 1, 1), ("2alpha+2n+1", 2 * a + 2 * n + 1, 1)]
        return 0j, ratio(-n * (n + 1), dens, n, p)
    tilde_beta = ratio(
        (2 * n + 2) * (a - b),
        [(f"alpha+beta+{2 * n}", s + 2 * n, 1), (f"alpha+beta+{2 * n + 2}", s + 2 * n + 2, 1)],
        n, p,
    )
    if n == 0:
        return tilde_beta, 0j
    tilde_gamma = ratio(
        -4 * n * (n + 1) * (a + n) * (b + n),
        [
            (f"alpha+beta+{2 * n - 1}", s + 2 * n - 1, 1),
            (f"alpha+beta+{2 * n}", s + 2 * n, 2),
            (f"alpha+beta+{2 * n + 1}", s + 2 * n + 1, 1),
        ],
        n, p,
    )
    return tilde_beta, tilde_gamma


def structure_coeffs(params, n: int) -> StructurePairs:
    """All four structure coefficients; raises if any of them is degenerate."""
    return StructurePairs(*first_structure_coeffs(params, n), *second_structure_coeffs(params, n))


def _coeff_table(p: JacobiParams, n: int) -> list[RecurrencePair]:
    return [recurrence_coeffs(p, k) for k in range(n)]


def is_admissible(params, n: int) -> bool:
    """True when every recurrence coefficient up to degree ``n`` exists."""
    try:
        _coeff_table(as_params(params), n)
    except DegenerateParams:
        return False
    return True


def jacobi_poly(params, n: int) -> np.ndarray:
    """Monic coefficients of P_n^(alpha, beta), lowest power first."""
    p = as_params(params)
    _check_degree(n)
    prev = np.zeros(0, dtype=complex)
    cur = np.ones(1, dtype=complex)
    for k, (bk, gk) in enumerate(_coeff_table(p, n)):
        nxt = np.zeros(k + 2, dtype=complex)
        nxt[1:] += cur
        nxt[:-1] -= bk * cur
        if k > 0:
            nxt[: len(prev)] -= gk * prev
        prev, cur = cur, nxt
    return cur


def jacobi_eval(params, n: int, z):
    """P_n^(alpha, beta)(z) by the value-space recurrence; ``z`` may be an array."""
    p = as_params(params)
    _check_degree(n)
    z = np.asarray(z, dtype=complex)
    prev = np.zeros_like(z)
    cur = np.ones_like(z)
    for k, (bk, gk) in enumerate(_coeff_table(p, n)):
        prev, cur = cur, (z - bk) * cur - gk * prev
    return cur[()] if cur.ndim == 0 else cur


def jacobi_eval_with_derivative(params, n: int, z):
    """(P_n(z), P_n'(z)) from the recurrence and its derivative."""
    p = as_params(params)
    _check_degree(n)
    z = np.asarray(z, dtype=complex)
    prev, cur = np.zeros_like(z), np.ones_like(z)
    dprev, dcur = np.zeros_like(z), np.zeros_like(z)
    for bk, gk in _coeff_table(p, n):
        prev, cur, dprev, dcur = (
            cur,
            (z - bk) * cur - gk * prev,
            dcur,
            cur + (z - bk) * dcur - gk * dprev,
        )
    if cur.ndim == 0:
        return cur[()], dcur[()]
    return cur, dcur


# ---------------------------------------------------------------------------
# Gamma function: Lanczos, g = 607/128, 15 terms (Godfrey's coefficients)

_LANCZOS_G = 607 / 128
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _lanczos_log(z: complex) -> complex:
    # log Gamma(z) for Re z >= 1/2
    z = z - 1
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def loggamma(z) -> complex:
    """A logarithm of Gamma(z); the branch is not the principal one off the real axis."""
    z = complex(z)
    if _is_pole(z):
        raise GammaPole(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return _lanczos_log(z)
    return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos_log(1 - z)


def gamma(z) -> complex:
    """Complex Gamma function (Lanczos with reflection for Re z < 1/2)."""
    z = complex(z)
    if _is_pole(z):
        raise GammaPole(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return cmath.exp(_lanczos_log(z))
    return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_lanczos_log(1 - z)))


def total_mass(params) -> complex:
    """2^(a+b+1) Gamma(a+1) Gamma(b+1) / Gamma(a+b+2), the integral of the weight."""
    p = as_params(params)
    a, b = p.alpha, p.beta
    return cmath.exp(
        (a + b + 1) * math.log(2) + loggamma(a + 1) + loggamma(b + 1) - loggamma(a + b + 2)
    )


def squared_norm(params, n: int) -> complex:
    """Squared norm of P_n^(alpha, beta) for the weight (1-z)^alpha (1+z)^beta."""
    p = as_params(params)
    _check_degree(n)
    a, b = p.alpha, p.beta
    s = a + b
    if n == 0:
        # Gamma(s+n+1) / Gamma(s+2n+1) cancels identically
        return total_mass(p)
    log_val = (
        (2 * n + s + 1) * math.log(2)
        + math.lgamma(n + 1)
        + loggamma(a + n + 1)
        + loggamma(b + n + 1)
        + loggamma(s + n + 1)
        - loggamma(s + 2 * n + 1)
        - loggamma(s + 2 * n + 2)
    )
    return cmath.exp(log_val)


# ---------------------------------------------------------------------------

def classical_leading_coeff(params, n: int) -> complex:
    """Leading coefficient (alpha+beta+n+1)_n / (2^n n!) of the classical P_n^(alpha, beta).

    The monic polynomial times this factor is the classically normalised one,
    whose growth off [-1, 1] is phi(z)^n / sqrt(n) times a bounded factor.
    """
    p = as_params(params)
    _check_degree(n)
    s = p.alpha + p.beta
    out = 1 + 0j
    for j in range(n):
        out *= (s + n + 1 + j) / (2 * (j + 1))
    return out


def asymptotic_ratio(params, n: int, z) -> float:
    """|k_n P_n(z)| sqrt(n) / |phi(z)|^n with k_n the classical leading coefficient.

    Tends to |c(alpha, beta, z)| as n grows; the constant itself is not computed.
    """
    z = complex(z)
    val = classical_leading_coeff(params, n) * jacobi_eval(params, n, z)
    return abs(val) * math.sqrt(n) / abs(phi(z)) ** n


def phi(z) -> complex:
    """Exterior conformal map z + sqrt(z^2 - 1), branch with modulus > 1."""
    z = complex(z)
    if not pc.is_finite_point(z):
        raise ValueError("phi needs a finite argument")
    r = cmath.sqrt(z * z - 1)
    plus, minus = z + r, z - r
    if abs(z.imag) <= 1e-14 and abs(z.real) <= 1 + 1e-14:
        warnings.warn(f"phi({z}) is on the cut [-1, 1]", BranchAmbiguity, stacklevel=2)
    return plus if abs(plus) >= abs(minus) else minus


def second_order_ode_residual(params, n: int, z) -> float:
    """|(1-z^2)P'' + (b-a-z(a+b+2))P' + n(a+b+n+1)P| at ``z``."""
    p = as_params(params)
    P = jacobi_poly(p, n)
    d1 = pc.derivative(P)
    d2 = pc.derivative(d1)
    z = complex(z)
    a, b = p.alpha, p.beta
    val = (
        (1 - z * z) * pc.evaluate(d2, z)
        + (b - a - z * (a + b + 2)) * pc.evaluate(d1, z)
        + n * (a + b + n + 1) * pc.evaluate(P, z)
    )
    return abs(val)


def forward_shift_check(params, n: int) -> float:
    """Coefficient residual of d/dz P_n^(a,b) = n P_{n-1}^(a+1,b+1)."""
    if n < 1:
        raise ValueError("forward shift needs n >= 1")
    p = as_params(params)
    lhs = pc.derivative(jacobi_poly(p, n))
    rhs = pc.scale(jacobi_poly(p.shifted(1), n - 1), n)
    return pc.identity_residual([lhs], [rhs])


def first_structure_residual(params, n: int) -> float:
    p = as_params(params)
    hat_beta, hat_gamma = first_structure_coeffs(p, n)
    dP = pc.derivative(jacobi_poly(p, n))
    lhs = [dP, pc.scale(pc.shift_up(dP, 2), -1)]
    terms = [pc.scale(jacobi_poly(p, n + 1), -n), pc.scale(jacobi_poly(p, n), hat_beta)]
    if n >= 1:
        terms.append(pc.scale(jacobi_poly(p, n - 1), hat_gamma))
    return pc.identity_residual(lhs, terms)


def second_structure_residual(params, n: int) -> float:
    p = as_params(params)
    tilde_beta, tilde_gamma = second_structure_coeffs(p, n)
    lhs = jacobi_poly(p.shifted(-1), n + 1)
    terms = [jacobi_poly(p, n + 1), pc.scale(jacobi_poly(p, n), tilde_beta)]
    if n >= 1:
        terms.append(pc.scale(jacobi_poly(p, n - 1), tilde_gamma))
    return pc.identity_residual([lhs], terms)
