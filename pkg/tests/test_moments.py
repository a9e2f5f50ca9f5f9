import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from polar_jacobi.errors import CapacityExceeded, DegenerateParams, NearDegenerateWarning, RegimeError
from polar_jacobi.jacobi import jacobi_poly, squared_norm, total_mass
from polar_jacobi.moments import (
    build_moments,
    extended_jacobi_poly,
    extended_polar_poly,
    inner_product,
    second_part_case,
    verify_theorem1,
)
from polar_jacobi.polar import PolarSpec, polar_poly


def beta_moment(a, b, k):
    """mu_k via z = 1 - 2t and Beta integrals: sum_j C(k,j) (-2)^j 2^(a+b+1) B(a+j+1, b+1)."""
    with mpmath.workdps(30):
        a, b = mpmath.mpc(a), mpmath.mpc(b)
        return complex(
            2 ** (a + b + 1) * mpmath.fsum(mpmath.binomial(k, j) * (-2) ** j * mpmath.beta(a + j + 1, b + 1) for j in range(k + 1))
        )


def mp_monic_jacobi(a, b, n, z):
    with mpmath.workdps(30):
        a, b = mpmath.mpc(a), mpmath.mpc(b)
        lead = mpmath.rf(n + a + b + 1, n) / (2**n * mpmath.factorial(n))
        return mpmath.jacobi(n, a, b, mpmath.mpc(z)) / lead


STANDARD = st.builds(
    complex, st.floats(-0.95, 4, allow_nan=False), st.floats(-2, 2, allow_nan=False)
)


# ---------------------------------------------------------------------------
# table

def test_moment_examples():
    mu = build_moments((0, 0), 4).mu
    np.testing.assert_allclose(mu[:3], [2, 0, 2 / 3], rtol=1e-15, atol=1e-16)
    assert build_moments((1, 0), 2).mu[0] == pytest.approx(2, rel=1e-14)
    assert build_moments((-0.5, -0.5), 2).mu[0] == pytest.approx(math.pi, rel=1e-14)
    t = build_moments((0.5, 2), 7)
    assert len(t) == 8 and t.capacity == 7


@settings(max_examples=20)
@given(STANDARD, STANDARD)
def test_mu0_and_beta_oracle(a, b):
    t = build_moments((a, b), 6)
    assert abs(t.mu[0] - total_mass((a, b))) <= 1e-12 * abs(t.mu[0])
    for k in range(7):
        ref = beta_moment(a, b, k)
        # the absolute floor covers moments that vanish exactly, where the oracle sum cancels
        assert abs(t.mu[k] - ref) <= 1e-10 * abs(ref) + 1e-25 * abs(t.mu[0])


@given(st.floats(-0.95, 4))
def test_odd_moments_vanish_when_symmetric(a):
    t = build_moments((a, a), 15)
    assert np.max(np.abs(t.mu[1::2])) <= 1e-12 * abs(t.mu[0])


def test_regime_error():
    with pytest.raises(RegimeError):
        build_moments((-1, 0.5), 4)
    with pytest.raises(RegimeError):
        build_moments((-4, 1), 4)
    with pytest.raises(ValueError):
        build_moments((0, 0), -1)


# ---------------------------------------------------------------------------
# inner product

def test_inner_product_examples():
    t = build_moments((0, 0), 4)
    assert inner_product([1], [1], t) == pytest.approx(2, rel=1e-15)
    assert inner_product([0, 1], [0, 1], t) == pytest.approx(squared_norm((0, 0), 1), rel=1e-14)
    t = build_moments((0.5, 2), 8)
    p3, p1 = jacobi_poly((0.5, 2), 3), jacobi_poly((0.5, 2), 1)
    bound = abs(squared_norm((0.5, 2), 3) * squared_norm((0.5, 2), 1)) ** 0.5
    assert abs(inner_product(p3, p1, t)) <= 1e-10 * bound
    assert inner_product([], [1, 2], t) == 0


def test_inner_product_not_conjugated():
    t = build_moments((0.3 + 0.5j, 1), 4)
    p = [1j, 2]
    assert inner_product(p, p, t) == pytest.approx(
        sum(p[i] * p[j] * t.mu[i + j] for i in range(2) for j in range(2)), rel=1e-14
    )


def test_capacity_exceeded():
    t = build_moments((0, 0), 4)
    inner_product([0, 0, 1], [0, 0, 1], t)
    with pytest.raises(CapacityExceeded):
        inner_product([0, 0, 1], [0, 0, 0, 1], t)


coeff_lists = st.lists(
    st.builds(complex, st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=6
)


@given(STANDARD, STANDARD, coeff_lists, coeff_lists, coeff_lists, st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_bilinearity(a, b, p, q, r, x, y):
    t = build_moments((a, b), 12)
    n = max(len(p), len(q))
    pp = np.zeros(n, dtype=complex)
    qq = np.zeros(n, dtype=complex)
    pp[: len(p)] = p
    qq[: len(q)] = q
    lhs = inner_product(x * pp + y * qq, r, t)
    ip, iq = inner_product(pp, r, t), inner_product(qq, r, t)
    # relative to the size of the terms being combined
    scale = abs(x * ip) + abs(y * iq) + (abs(x) + abs(y)) * np.sum(np.abs(np.outer(np.r_[pp, qq], r))) * abs(t.mu0) * 1e-3
    assert abs(lhs - (x * ip + y * iq)) <= 1e-13 * max(scale, 1e-300)


@pytest.mark.parametrize("a,b", [(0, 0), (0.5, 2), (-0.5, -0.5), (-0.9, 3.0), (2.5, -0.7)])
def test_hankel_positivity(a, b):
    t = build_moments((a, b), 10)
    with mpmath.workprec(200):
        H = mpmath.matrix(6, 6)
        for i in range(6):
            for j in range(6):
                H[i, j] = t.normalized[i + j] * t.mu0.real
        prod = mpmath.mpf(1)
        for m in range(1, 7):
            det = mpmath.re(mpmath.det(H[:m, :m]))
            prod *= squared_norm((a, b), m - 1).real
            assert det > 0
            # det H_m = prod_{k<m} ||P_k||^2
            assert abs(det - prod) <= 1e-10 * prod
    assert all(t.normalized[i + j] == t.normalized[j + i] for i in range(6) for j in range(6))


def test_extended_builders_agree_with_double():
    spec = PolarSpec.of(0.5 - 0.3j, 1.5, 0.7 + 0.2j, 8)
    ext = np.array([complex(c) for c in extended_polar_poly(spec)])
    assert np.max(np.abs(ext - polar_poly(spec))) <= 1e-12 * np.max(np.abs(ext))
    ej = np.array([complex(c) for c in extended_jacobi_poly((0.5, 2), 9)])
    np.testing.assert_allclose(ej, jacobi_poly((0.5, 2), 9), rtol=1e-13, atol=1e-15)


# ---------------------------------------------------------------------------
# orthogonality of the polar polynomial

def test_case_labels():
    assert [second_part_case(5, m) for m in (0, 2, 4, 5, 6, 9)] == [
        "m=0", "0<m<n-1", "m=n-1", "m=n", "m=n+1", "m>n+1",
    ]


def test_orthogonality_examples():
    spec = PolarSpec.of(0.5, 2, 3, 5)
    for m in range(9):
        r = verify_theorem1(spec, m)
        assert r.residual_first <= (1e-8 if m == 5 else 1e-9)
        assert r.residual_second <= 1e-8


def test_orthogonality_m0_value_independent():
    # <(z - xi) P_5, 1> = -mu_0 P_6^(-1/2, 1)(3), both sides computed separately
    spec = PolarSpec.of(0.5, 2, 3, 5)
    with mpmath.workdps(30):
        mass = 2**3.5 * mpmath.gamma(1.5) * mpmath.gamma(3) / mpmath.gamma(4.5)
        expected = complex(-mass * mp_monic_jacobi(-0.5, 1, 6, 3))
    zP = np.convolve(polar_poly(spec), [-3, 1])
    got = inner_product(zP, [1], build_moments((0.5, 2), 12))
    assert abs(got - expected) <= 1e-8 * abs(expected)
    assert verify_theorem1(spec, 0).residual_second <= 1e-8


def test_orthogonality_small_degree_has_no_second_part():
    r = verify_theorem1(PolarSpec.of(0.5, 2, 3, 1), 1)
    assert r.case_label is None and r.residual_second is None
    assert r.residual_first <= 1e-8


def test_orthogonality_errors():
    with pytest.raises(RegimeError):
        verify_theorem1(PolarSpec.of(-1.5, 2, 3, 4), 1)
    with pytest.raises(ValueError):
        verify_theorem1(PolarSpec.of(0.5, 2, 3, 4), -1)


def test_orthogonality_double_precision_route():
    # for |xi| <= 1 the double-precision construction is already accurate
    spec = PolarSpec.of(0.3 + 0.2j, 1.1, 0.5 - 0.4j, 8)
    for m in range(11):
        r = verify_theorem1(spec, m, extended=False)
        assert r.residual_first <= 1e-9 and r.residual_second <= 1e-8


@settings(max_examples=25)
@given(STANDARD, STANDARD, st.complex_numbers(max_magnitude=3), st.integers(2, 12), st.integers(0, 14))
def test_orthogonality_property(a, b, xi, n, m):
    try:
        r = verify_theorem1(PolarSpec.of(a, b, xi, n), m)
    except (DegenerateParams, NearDegenerateWarning):
        assume(False)
    assert r.residual_first <= (1e-8 if m == n else 1e-9)
    assert r.residual_second <= 1e-8
