"""Verification suites shared by the CLI ``verify`` command and the test-suite.

Each suite returns a :class:`SuiteResult`.  Specs that hit a vanishing
denominator are counted under ``skipped``; a suite with no evaluable case is
``not_applicable`` rather than passing or failing.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import poly_core as pc
from .errors import DegenerateParams, NearDegenerateWarning, NoConvergence, PreconditionFailed
from .jacobi import JacobiParams, Regime, jacobi_poly, second_structure_coeffs, squared_norm
from .moments import build_moments, inner_product, verify_theorem1
from .polar import (
    PolarSpec,
    dual_construction_residual,
    factorization_applies,
    factorization_check,
    operator_identity_residual,
    polar_poly_divdiff,
    polar_poly_recurrence,
    polar_poly_route,
    reflect_check,
    structure_expansion_residual,
)
from .zeros import (
    Verdict,
    asymptotic_ellipse_distance,
    disk_bound_check,
    ellipse_exclusion_check,
    find_roots,
    gauss_lucas_check,
    level_curve_residuals,
    multiplicity_audit,
    segment_distances,
)

SEED = 20240601

# caption parameter sets: (alpha, beta, n, pole radius, pole count)
FIGURE_1 = {
    "1L": (0.5, 2.0, 30, 3.0, 30),
    "1R": (math.sqrt(3), math.pi, 30, 3.0, 23),
}
FIGURE_3_PARAMS = (-0.5 + 1j, -1.45 - 0.5j)
FIGURE_3 = {"3L": (2,), "3R": (3, 4, 5)}


def pole_sweep(radius: float, count: int) -> list[complex]:
    return [radius * cmath.exp(2j * math.pi * k / count) for k in range(count)]


def figure_specs(fig: str) -> list[tuple[int, PolarSpec]]:
    """(k, spec) pairs for a caption parameter set, ordered by k then degree."""
    if fig in FIGURE_1:
        a, b, n, radius, count = FIGURE_1[fig]
        return [(k, PolarSpec.of(a, b, xi, n)) for k, xi in enumerate(pole_sweep(radius, count))]
    if fig in FIGURE_3:
        a, b = FIGURE_3_PARAMS
        return [
            (k, PolarSpec.of(a, b, xi, n))
            for k, xi in enumerate(pole_sweep(1.0, 30))
            for n in FIGURE_3[fig]
        ]
    raise KeyError(fig)


def _disk(rng, radius: float) -> complex:
    return radius * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())


def _clean(spec: PolarSpec, extra: Optional[Callable[[PolarSpec], object]] = None) -> bool:
    """True when both constructions succeed with no denominator within 1e-6 of zero."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", NearDegenerateWarning)
        try:
            polar_poly_recurrence(spec)
            polar_poly_divdiff(spec)
            jacobi_poly(spec.params, spec.degree + 1)
            second_structure_coeffs(spec.params, spec.degree)
            if extra is not None:
                extra(spec)
        except (DegenerateParams, NearDegenerateWarning, ArithmeticError):
            return False
    return True


def random_specs(count: int, max_degree: int, seed: int = SEED, min_degree: int = 0) -> list[PolarSpec]:
    """Admissible specs with |alpha|, |beta| <= 4 complex, |xi| <= 4."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        spec = PolarSpec.of(
            _disk(rng, 4), _disk(rng, 4), _disk(rng, 4), int(rng.integers(min_degree, max_degree + 1))
        )
        if _clean(spec, lambda s: polar_poly_recurrence(s.mirrored())):
            out.append(spec)
    return out


def random_standard_params(rng) -> JacobiParams:
    """Re alpha, Re beta in (-0.9, 3), imaginary parts in (-1, 1)."""
    return JacobiParams(
        complex(rng.uniform(-0.9, 3), rng.uniform(-1, 1)),
        complex(rng.uniform(-0.9, 3), rng.uniform(-1, 1)),
    )


def random_standard_specs(count: int, max_degree: int, seed: int = SEED, min_degree: int = 2) -> list[PolarSpec]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        par = random_standard_params(rng)
        spec = PolarSpec(par, _disk(rng, 3), int(rng.integers(min_degree, max_degree + 1)))
        if _clean(spec):
            out.append(spec)
    return out


@dataclass
class SuiteResult:
    name: str
    status: str  # "pass", "fail" or "not_applicable"
    max_residual: Optional[float]
    cases: int
    threshold: Optional[float] = None
    skipped: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def _residual_suite(name: str, items: Iterable, fn: Callable, threshold: float, note: str = "") -> SuiteResult:
    worst, cases, skipped = 0.0, 0, 0
    for item in items:
        try:
            r = fn(item)
        except (DegenerateParams, PreconditionFailed):
            skipped += 1
            continue
        if r is None:
            skipped += 1
            continue
        cases += 1
        worst = max(worst, float(r))
    if cases == 0:
        return SuiteResult(name, "not_applicable", None, 0, threshold, skipped, note)
    return SuiteResult(name, "pass" if worst <= threshold else "fail", worst, cases, threshold, skipped, note)


def _op_residual(spec: PolarSpec) -> float:
    p, _ = polar_poly_route(spec)
    return operator_identity_residual(spec, p)


def operator_identity_suite(specs, threshold: float = 1e-10) -> SuiteResult:
    return _residual_suite("operator_identity", specs, _op_residual, threshold)


def dual_construction_suite(specs, threshold: float = 1e-8) -> SuiteResult:
    return _residual_suite("dual_construction", specs, dual_construction_residual, threshold)


def structure_expansion_suite(specs, threshold: float = 1e-10) -> SuiteResult:
    return _residual_suite(
        "structure_expansion", [s for s in specs if s.degree >= 1], structure_expansion_residual, threshold
    )


def reflect_suite(specs, threshold: float = 1e-11) -> SuiteResult:
    return _residual_suite("reflect", specs, reflect_check, threshold)


DEFAULT_FACTORIZATIONS = [
    (k, other, n, side)
    for k in (1, 2, 3, 4)
    for other in (1.0, 0.5, 2 + 0.5j)
    for n in range(0, 5)
    for side in ("minus", "plus")
]


def _factorization_residual(case) -> Optional[float]:
    r = factorization_check(*case)
    vals = [v for v in (r.factorization, r.nested, r.a_shift, r.b_shift) if v is not None]
    return max(vals) if vals else None


def factorization_suite(cases=None, threshold: float = 1e-10) -> SuiteResult:
    cases = DEFAULT_FACTORIZATIONS if cases is None else cases
    return _residual_suite(
        "factorization", cases, _factorization_residual, threshold,
        note="cases with nothing to compare (n = 0 and a degenerate left side) are skipped",
    )


def theorem1_suite(specs, threshold_first: float = 1e-9, threshold_diag: float = 1e-8,
                   threshold_second: float = 1e-8) -> SuiteResult:
    """Both orthogonality relations for m = 0 .. n+2.

    Residuals are reported as a fraction of their own threshold so one
    number summarises three contracts; pass iff it is <= 1.
    """
    def one(spec: PolarSpec):
        if spec.params.regime is not Regime.STANDARD:
            return None
        n = spec.degree
        table = build_moments(spec.params, 2 * n + 6)
        worst = 0.0
        for m in range(n + 3):
            r = verify_theorem1(spec, m, table)
            t1 = threshold_diag if m == n else threshold_first
            worst = max(worst, r.residual_first / t1)
            if r.residual_second is not None:
                worst = max(worst, r.residual_second / threshold_second)
        return worst

    return _residual_suite("theorem1", specs, one, 1.0, note="max residual / threshold")


def norm_suite(params_list, max_degree: int = 12, threshold: float = 1e-8) -> SuiteResult:
    def one(par: JacobiParams):
        if par.regime is not Regime.STANDARD:
            return None
        table = build_moments(par, 2 * max_degree)
        worst = 0.0
        for n in range(max_degree + 1):
            P = jacobi_poly(par, n)
            ref = squared_norm(par, n)
            worst = max(worst, abs(inner_product(P, P, table) - ref) / abs(ref))
        return worst

    return _residual_suite("squared_norm", params_list, one, threshold)


@dataclass
class ZeroCase:
    spec: PolarSpec
    zeros: object  # ZeroSet


def compute_zero_cases(specs, tol: float = 1e-10) -> list[ZeroCase]:
    out = []
    for spec in specs:
        try:
            p, _ = polar_poly_route(spec)
        except DegenerateParams:
            continue
        if spec.degree >= 1:
            out.append(ZeroCase(spec, find_roots(p, tol)))
    return out


def disk_suite(cases: list[ZeroCase], margin: float = 1e-8) -> SuiteResult:
    """Excess over 2 + |xi| relative to 1 + radius; standard regime only."""
    def one(c: ZeroCase):
        if c.spec.params.regime is not Regime.STANDARD:
            return None
        d = disk_bound_check(c.zeros, c.spec.pole)
        return d.max_excess / (1 + d.radius)

    return _residual_suite("disk_bound", cases, one, margin)


def level_curve_suite(cases: list[ZeroCase], threshold: float = 1e-6) -> SuiteResult:
    return _residual_suite(
        "level_curve", cases, lambda c: max(level_curve_residuals(c.zeros, c.spec), default=0.0), threshold
    )


def multiplicity_suite(cases: list[ZeroCase]) -> SuiteResult:
    verdicts = [multiplicity_audit(c.zeros, c.spec) for c in cases]
    applicable = [v for v in verdicts if v.verdict is not Verdict.NOT_APPLICABLE]
    mmax = max((v.max_multiplicity for v in verdicts), default=0)
    note = f"max multiplicity observed {mmax}"
    if not applicable:
        return SuiteResult("multiplicity_audit", "not_applicable", None, 0, None, len(verdicts), note)
    failed = sum(v.verdict is Verdict.FAIL for v in applicable)
    return SuiteResult(
        "multiplicity_audit", "fail" if failed else "pass", float(failed), len(applicable), 0.0,
        len(verdicts) - len(applicable), note,
    )


def ellipse_suite(cases: list[ZeroCase]) -> SuiteResult:
    """Ellipse exclusion with a = (1 + delta) / 2; residual 1 means a violation."""
    def one(c: ZeroCase):
        if c.spec.params.regime is not Regime.STANDARD:
            return None
        _, small = segment_distances(c.spec.pole)
        ok = ellipse_exclusion_check(c.zeros, c.spec.pole, (1 + small) / 2)
        return 0.0 if ok else 1.0

    return _residual_suite("ellipse_exclusion", cases, one, 0.0)


def gauss_lucas_suite(specs) -> SuiteResult:
    def one(spec: PolarSpec):
        if spec.degree < 2:
            return None
        p, _ = polar_poly_route(spec)
        return 0.0 if gauss_lucas_check(p) else 1.0

    return _residual_suite("gauss_lucas", specs, one, 0.0)


def asymptotic_trend_suite(alpha=0.3, beta=0.3, xi=2.0, low: int = 15, high: int = 60) -> SuiteResult:
    """Residual is d(high) / d(low); the trend holds when it is below 1."""
    try:
        d = []
        for n in (low, high):
            p, _ = polar_poly_route(PolarSpec.of(alpha, beta, xi, n))
            d.append(asymptotic_ellipse_distance(find_roots(p), xi))
    except (DegenerateParams, PreconditionFailed, NoConvergence) as exc:
        return SuiteResult("asymptotic_trend", "not_applicable", None, 0, None, 1, str(exc))
    ratio = d[1] / d[0] if d[0] > 0 else math.inf
    status = "pass" if d[1] < d[0] else "fail"
    return SuiteResult(
        "asymptotic_trend", status, ratio, 2, 1.0, 0, f"distance n={low}: {d[0]:.3e}, n={high}: {d[1]:.3e}"
    )


def default_suites(threshold: Optional[float] = None, tol: float = 1e-10) -> list[SuiteResult]:
    """Every suite over the built-in sweeps; ``threshold`` overrides every residual contract."""
    def t(default):
        return default if threshold is None else threshold

    sweep = random_specs(200, 40)
    dual = random_specs(200, 50, seed=SEED + 1)
    fig3 = [s for _, s in figure_specs("3L") + figure_specs("3R")]
    refl = random_specs(100, 40, seed=SEED + 2) + fig3
    standard = random_standard_specs(10, 12)
    rng = np.random.default_rng(SEED + 3)
    pairs = [random_standard_params(rng) for _ in range(10)]
    fig1 = [s for f in FIGURE_1 for _, s in figure_specs(f)]
    zc = compute_zero_cases(fig1, tol)
    double_root = PolarSpec.of(0, 1, (1 + 2 * math.sqrt(6)) / 5, 2)
    zc_audit = zc + compute_zero_cases([double_root], tol)

    results = [
        operator_identity_suite(sweep, t(1e-10)),
        dual_construction_suite(dual, t(1e-8)),
        structure_expansion_suite(sweep, t(1e-10)),
        reflect_suite(refl, t(1e-11)),
        factorization_suite(None, t(1e-10)),
        theorem1_suite(standard, t(1e-9), t(1e-8), t(1e-8)),
        norm_suite(pairs, 12, t(1e-8)),
        disk_suite(zc, t(1e-8)),
        level_curve_suite(zc, t(1e-6)),
        multiplicity_suite(zc_audit),
        ellipse_suite(zc),
        gauss_lucas_suite([PolarSpec.of(0.5, 2, 3, 10)] + sweep[:20]),
        asymptotic_trend_suite(),
    ]
    return results


def spec_suites(alpha, beta, xi, n: int, threshold: Optional[float] = None, tol: float = 1e-10) -> list[SuiteResult]:
    """The same suites restricted to one parameter set, degrees 0..n."""
    def t(default):
        return default if threshold is None else threshold

    specs = [PolarSpec.of(alpha, beta, xi, k) for k in range(n + 1)]
    par = specs[0].params
    zc = compute_zero_cases(specs, tol)
    fact_cases = []
    for k_spec in specs:
        match = factorization_applies(k_spec)
        if match is not None:
            k, other, side = match
            fact_cases.append((k, other, k_spec.degree - k, side))
    fact = (
        factorization_suite(fact_cases, t(1e-10))
        if fact_cases
        else SuiteResult("factorization", "not_applicable", None, 0, None, 0, "no negative-integer parameter at xi = +-1")
    )
    return [
        operator_identity_suite(specs, t(1e-10)),
        dual_construction_suite(specs, t(1e-8)),
        structure_expansion_suite(specs, t(1e-10)),
        reflect_suite(specs, t(1e-11)),
        fact,
        theorem1_suite([s for s in specs if s.degree >= 2], t(1e-9), t(1e-8), t(1e-8)),
        norm_suite([par], n, t(1e-8)),
        disk_suite(zc, t(1e-8)),
        level_curve_suite(zc, t(1e-6)),
        multiplicity_suite(zc),
        ellipse_suite(zc) if segment_distances(xi)[1] > 1 else SuiteResult(
            "ellipse_exclusion", "not_applicable", None, 0, None, 0, "distance from xi to [-1, 1] is at most 1"
        ),
        gauss_lucas_suite(specs),
        asymptotic_trend_suite(alpha, beta, xi),
    ]
