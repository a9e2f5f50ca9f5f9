import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from polar_jacobi import poly_core as pc
from polar_jacobi.errors import DegenerateParams, NearDegenerateWarning
from polar_jacobi.jacobi import JacobiParams, jacobi_eval, jacobi_poly, second_structure_coeffs
from polar_jacobi.polar import (
    PolarSpec,
    dual_construction_residual,
    factorization_applies,
    factorization_check,
    operator_identity_residual,
    polar_a,
    polar_b,
    polar_eval,
    polar_poly,
    polar_poly_divdiff,
    polar_poly_recurrence,
    polar_poly_route,
    polar_recurrence_coeffs,
    reflect_check,
    sobolev_Q,
    structure_expansion_residual,
)
from polar_jacobi.zeros import find_roots

SKIP = (DegenerateParams, NearDegenerateWarning)
XI_PLUS = (1 + 2 * math.sqrt(6)) / 5
Z = sp.symbols("z")


# ---------------------------------------------------------------------------
# exact oracle: classical Jacobi by the explicit binomial sum (no recurrence,
# so it exists where the monic recurrence has a vanishing denominator)

def exact_monic_jacobi(n, a, b) -> sp.Poly:
    a, b = sp.nsimplify(a), sp.nsimplify(b)
    expr = sum(
        sp.binomial(n + a, n - s) * sp.binomial(n + b, s) * ((Z - 1) / 2) ** s * ((Z + 1) / 2) ** (n - s)
        for s in range(n + 1)
    )
    p = sp.Poly(sp.expand(expr), Z)
    return sp.Poly(p.as_expr() / p.LC(), Z)


def exact_polar(n, a, b, xi) -> sp.Poly:
    """(P_{n+1}^(a-1,b-1)(z) - P_{n+1}^(a-1,b-1)(xi)) / (z - xi) in rationals."""
    xi = sp.nsimplify(xi)
    P = exact_monic_jacobi(n + 1, sp.nsimplify(a) - 1, sp.nsimplify(b) - 1)
    q, r = sp.div(P - P.eval(xi), sp.Poly(Z - xi, Z))
    assert r.is_zero
    return q


def to_array(p: sp.Poly) -> np.ndarray:
    return np.array([complex(c) for c in reversed(p.all_coeffs())])


def cplx(bound):
    part = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part).filter(lambda c: abs(c) <= bound)


# ---------------------------------------------------------------------------
# spec

def test_spec_fields():
    s = PolarSpec.of(0.5, 2, 3, 4)
    assert s.alpha == 0.5 and s.beta == 2 and s.pole == 3 and s.degree == 4
    assert s.shifted == JacobiParams(-0.5, 1)
    assert s.mirrored() == PolarSpec.of(2, 0.5, -3, 4)
    assert s.with_degree(7).degree == 7
    with pytest.raises(ValueError):
        PolarSpec.of(0, 0, complex("nan"), 1)


# ---------------------------------------------------------------------------
# recurrence coefficients

def test_symmetric_case_coefficients():
    for a in (0.3, -0.25, 1.7 + 0.4j):
        for n in range(1, 12):
            c = polar_recurrence_coeffs((a, a), n)
            assert c.a == 0
            expected = -(n + 1) * (2 * a + n - 1) / ((2 * a + 2 * n - 1) * (2 * a + 2 * n + 1))
            assert abs(c.b - expected) <= 1e-15 * abs(expected)


def test_symmetric_form_matches_general_formula():
    # general b_n at alpha = beta, in Fractions
    a = Fraction(3, 10)
    for n in range(1, 8):
        s = 2 * a
        general = -4 * (n + 1) * (a + n) ** 2 * (s + n - 1) / ((s + 2 * n - 1) * (s + 2 * n) ** 2 * (s + 2 * n + 1))
        assert polar_b((0.3, 0.3), n) == pytest.approx(float(general), rel=1e-14)


def test_zero_factor_example():
    assert polar_a((2, 0), 0) == 0


def test_coefficients_match_exact_structure():
    # P_{n+1} - z P_n = a_n P_n + b_n P_{n-1} + const, read off from exact polynomials
    a, b, xi = Fraction(1, 2), 2, 3
    for n in range(2, 7):  # at n = 1 the constant term mixes with b_1
        top, mid, low = (exact_polar(k, a, b, xi) for k in (n + 1, n, n - 1))
        diff = (top - sp.Poly(Z, Z) * mid).all_coeffs()[::-1]
        a_n = diff[n]
        b_n = diff[n - 1] - a_n * mid.all_coeffs()[::-1][n - 1]
        c = polar_recurrence_coeffs((0.5, 2), n)
        assert abs(c.a - complex(a_n)) <= 1e-14 * max(1, abs(c.a))
        assert abs(c.b - complex(b_n)) <= 1e-14 * max(1, abs(c.b))


def test_degenerate_coefficients_named():
    with pytest.raises(DegenerateParams) as info:
        polar_b((-4, 1), 2)
    assert info.value.factor.startswith("alpha+beta+")


# ---------------------------------------------------------------------------
# constructions

def test_degree_zero():
    for build in (polar_poly_recurrence, polar_poly_divdiff):
        np.testing.assert_array_equal(build(PolarSpec.of(0.5 + 1j, 2, 3 - 1j, 0)), [1])


def test_double_root_example():
    target = pc.from_roots([(1 - math.sqrt(6)) / 5] * 2)
    spec = PolarSpec.of(0, 1, XI_PLUS, 2)
    assert pc.coeff_residual(polar_poly_recurrence(spec), target) <= 1e-14
    assert pc.coeff_residual(polar_poly_divdiff(spec), target) <= 1e-14


def test_negative_integer_example_true_form():
    # both recurrence routes hit a vanishing denominator; the exact oracle is
    # (z - 1)^4 (z + 5/7)
    spec = PolarSpec.of(-4, 1, 1, 5)
    with pytest.raises(DegenerateParams):
        polar_poly_recurrence(spec)
    with pytest.raises(DegenerateParams):
        polar_poly_divdiff(spec)
    exact = exact_polar(5, -4, 1, 1)
    assert sp.factor(exact.as_expr()) == sp.factor((Z - 1) ** 4 * (Z + sp.Rational(5, 7)))
    p, route = polar_poly_route(spec)
    assert route == "factorization"
    assert pc.coeff_residual(p, to_array(exact)) <= 1e-14
    assert pc.coeff_residual(polar_poly(spec, "auto"), to_array(exact)) <= 1e-14
    # the form with z - 5/7 is not the polynomial
    assert pc.coeff_residual(p, pc.from_roots([1, 1, 1, 1, 5 / 7])) > 0.5


def test_route_names():
    assert polar_poly_route(PolarSpec.of(0.5, 2, 3, 4))[1] == "recurrence"
    with pytest.raises(ValueError):
        polar_poly(PolarSpec.of(0.5, 2, 3, 4), "magic")
    with pytest.raises(DegenerateParams):
        polar_poly_route(PolarSpec.of(-4, 1, 2, 5))


def test_factorization_applies():
    assert factorization_applies(PolarSpec.of(-4, 1, 1, 5)) == (4, 1, "minus")
    assert factorization_applies(PolarSpec.of(2, -3, -1, 3)) == (3, 2, "plus")
    assert factorization_applies(PolarSpec.of(-4, 1, 1, 3)) is None
    assert factorization_applies(PolarSpec.of(-4, 1, -1, 5)) is None


@pytest.mark.parametrize("a,b,xi,n", [(0.5, 2, 3, 4), (-0.5, 1.5, 0.25 - 1j, 6), (3, 0, -2, 5), (-0.75, 2.5, 0, 3)])
def test_constructions_match_exact_oracle(a, b, xi, n):
    exact = to_array(exact_polar(n, a, b, xi))
    spec = PolarSpec.of(a, b, xi, n)
    assert pc.coeff_residual(polar_poly_recurrence(spec), exact) <= 1e-13
    assert pc.coeff_residual(polar_poly_divdiff(spec), exact) <= 1e-13


def test_divdiff_examples():
    spec = PolarSpec.of(0, 1, 0, 1)
    assert pc.coeff_residual(polar_poly_divdiff(spec), polar_poly_recurrence(spec)) == 0
    assert dual_construction_residual(PolarSpec.of(0.5, 2, 3, 30)) <= 1e-8


@given(cplx(4), cplx(4), cplx(4), st.integers(0, 50))
def test_dual_construction(a, b, xi, n):
    try:
        r = dual_construction_residual(PolarSpec.of(a, b, xi, n))
    except SKIP:
        assume(False)
    assert r <= 1e-8


def test_polar_eval_matches_coefficients():
    spec = PolarSpec.of(0.5 - 0.5j, 1.2, 1.5 + 1j, 9)
    p = polar_poly(spec)
    z = np.array([0.3, -0.8 + 0.2j, 2j])
    np.testing.assert_allclose(polar_eval(spec, z), pc.evaluate(p, z), rtol=1e-11)


def test_near_degenerate_direct_call_warns():
    with pytest.warns(NearDegenerateWarning):
        polar_poly(PolarSpec.of(-1 + 1e-9, 0, 0.5, 2))  # alpha+beta+1 ~ 1e-9


# ---------------------------------------------------------------------------
# identities

def test_operator_identity_examples():
    assert operator_identity_residual(PolarSpec.of(0.3, 2, 1j, 0)) == 0
    assert operator_identity_residual(PolarSpec.of(0, 1, XI_PLUS, 2)) <= 1e-12
    assert operator_identity_residual(PolarSpec.of(math.sqrt(3), math.pi, 3j, 10)) <= 1e-10


@given(cplx(4), cplx(4), cplx(4), st.integers(0, 40))
def test_operator_identity(a, b, xi, n):
    try:
        r = operator_identity_residual(PolarSpec.of(a, b, xi, n))
    except SKIP:
        assume(False)
    assert r <= 1e-10


def test_sobolev_Q():
    spec = PolarSpec.of(0.5, 2, 3 - 1j, 1)
    np.testing.assert_array_equal(sobolev_Q(spec), [-(3 - 1j), 1])
    for n in range(1, 12):
        s = spec.with_degree(n)
        Q = sobolev_Q(s)
        assert len(Q) == n + 1 and Q[-1] == 1
        assert abs(pc.evaluate(Q, s.pole)) <= 1e-12 * pc.evaluate(np.abs(Q), abs(s.pole))
        # Q_{n+1}' = (n+1) P_n^(alpha, beta); the sum cancels terms of size |xi|^n,
        # so the tolerance is the operator-identity one
        dQ = pc.derivative(sobolev_Q(spec.with_degree(n + 1)))
        assert pc.coeff_residual(dQ, pc.scale(jacobi_poly(spec.params, n), n + 1)) <= 1e-10


def test_structure_expansion_examples():
    assert structure_expansion_residual(PolarSpec.of(0, 0, 0, 1)) <= 1e-14
    assert structure_expansion_residual(PolarSpec.of(0.5, 2, 3, 12)) <= 1e-10


def test_structure_expansion_symmetric_case():
    # alpha = beta: (z - xi) P_n = P_{n+1} + tg P_{n-1} - P_{n+1}^(a-1,a-1)(xi)
    spec = PolarSpec.of(0.8, 0.8, 1.5j, 6)
    tb, tg = second_structure_coeffs(spec.params, 6)
    assert tb == 0
    lhs = pc.mul_linear(polar_poly(spec), spec.pole)
    rhs = pc.add(jacobi_poly(spec.params, 7), pc.scale(jacobi_poly(spec.params, 5), tg))
    rhs = pc.add(rhs, [-jacobi_eval(spec.shifted, 7, spec.pole)])
    assert pc.coeff_residual(lhs, rhs) <= 1e-12


@given(cplx(4), cplx(4), cplx(4), st.integers(1, 40))
def test_structure_expansion(a, b, xi, n):
    try:
        r = structure_expansion_residual(PolarSpec.of(a, b, xi, n))
    except SKIP:
        assume(False)
    assert r <= 1e-10


def test_reflect_examples():
    spec = PolarSpec.of(1.3, 1.3, 0, 7)
    p = polar_poly(spec)
    np.testing.assert_allclose(p, polar_poly(spec.mirrored()))
    assert reflect_check(PolarSpec.of(0, 1, 0.7j, 5)) <= 1e-12
    assert reflect_check(PolarSpec.of(-0.5 + 1j, -1.45 - 0.5j, 1, 4)) <= 1e-11


@given(cplx(4), cplx(4), cplx(4), st.integers(0, 40))
def test_reflect(a, b, xi, n):
    try:
        r = reflect_check(PolarSpec.of(a, b, xi, n))
    except SKIP:
        assume(False)
    assert r <= 1e-11


# ---------------------------------------------------------------------------
# negative-integer factorisation

def test_factorization_k4():
    rep = factorization_check(4, 1, 1, "minus")
    assert rep.lhs_degenerate is not None  # recurrence cannot build the left side
    assert pc.coeff_residual(rep.rhs, to_array(exact_polar(5, -4, 1, 1))) <= 1e-14
    assert rep.nested <= 1e-12 and rep.a_shift <= 1e-12 and rep.b_shift <= 1e-12


def test_factorization_plus_degree_one():
    # P_1(z; 2, -1; -1) = z + 1
    rep = factorization_check(1, 2, 0, "plus")
    np.testing.assert_allclose(rep.rhs, [1, 1])
    assert rep.factorization == 0
    assert rep.nested is None


def test_coefficient_shift_example():
    lhs = polar_recurrence_coeffs((-2, 0.5), 5)
    rhs = polar_recurrence_coeffs((4, 0.5), 2)
    assert abs(lhs.a - rhs.a) <= 1e-12 * abs(rhs.a)
    assert abs(lhs.b - rhs.b) <= 1e-12 * abs(rhs.b)
    assert factorization_check(2, 0.5, 3, "minus").max_residual <= 1e-12


@pytest.mark.parametrize("side", ["minus", "plus"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_factorization_against_exact(k, side):
    other, n = Fraction(1, 2), 3
    rep = factorization_check(k, 0.5, n, side)
    a, b, xi = (-k, other, 1) if side == "minus" else (other, -k, -1)
    exact = to_array(exact_polar(n + k, a, b, xi))
    assert pc.coeff_residual(rep.rhs, exact) <= 1e-13
    assert rep.max_residual <= 1e-10


def test_factorization_bad_side():
    with pytest.raises(ValueError):
        factorization_check(1, 0, 1, "left")
    with pytest.raises(ValueError):
        factorization_check(0, 0, 1, "minus")


# ---------------------------------------------------------------------------
# zeros of P_n^(alpha, beta) and the polar polynomial

@pytest.mark.parametrize("a,b,xi,n", [(0.5, 2, 3, 8), (0.3, 0.3, 2j, 10), (1 + 0.5j, -0.4, 0.2 - 1.5j, 7)])
def test_operator_vanishes_at_jacobi_zeros(a, b, xi, n):
    # L_xi[P_n](zeta) = (n+1) P_n^(a,b)(zeta) = 0 at every Jacobi zero zeta
    spec = PolarSpec.of(a, b, xi, n)
    P = polar_poly(spec)
    dP = pc.derivative(P)
    for zeta in find_roots(jacobi_poly(spec.params, n)).locations:
        val = pc.evaluate(P, zeta) + (zeta - xi) * pc.evaluate(dP, zeta)
        scale = pc.evaluate(np.abs(P), abs(zeta)) + abs(zeta - xi) * pc.evaluate(np.abs(dP), abs(zeta))
        assert abs(val) <= 1e-8 * scale


def test_jacobi_zeros_are_not_polar_zeros_in_general():
    spec = PolarSpec.of(0.5, 2, 3, 6)
    P = polar_poly(spec)
    zeta = find_roots(jacobi_poly(spec.params, 6)).locations
    assert np.min(np.abs(pc.evaluate(P, zeta))) > 1e-3
