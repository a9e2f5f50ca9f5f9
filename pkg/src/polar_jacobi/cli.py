"""Command-line front end: ``polar-jacobi <command> [options]``.

Exit codes: 0 success, 1 bad arguments or unknown figure, 2 degenerate
parameters, 3 root iteration did not converge, 4 a verification suite failed.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import poly_core as pc
from .errors import DegenerateParams, DegreeTooLarge, NoConvergence
from .jacobi import MAX_DEGREE
from .polar import PolarSpec, polar_eval, polar_poly_divdiff, polar_poly_route
from .suites import FIGURE_1, FIGURE_3, default_suites, figure_specs, pole_sweep, spec_suites
from .zeros import ZeroSet, disk_bound_check, find_roots, level_curve_residuals

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_NUM})(?:([+-]{_NUM})i)?$")
COMPLEX_OPTIONS = ("--alpha", "--beta", "--xi", "--z")
FIGURES = tuple(FIGURE_1) + tuple(FIGURE_3)


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse RE or RE+IMi / RE-IMi (no spaces)."""
    m = _COMPLEX.match(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"not a complex number of the form RE[+-IMi]: {text!r}")
    re_part = float(m.group(1))
    im_part = float(m.group(2)) if m.group(2) else 0.0
    return complex(re_part, im_part)


@dataclass
class RunConfig:
    command: str
    alpha: complex = 0j
    beta: complex = 0j
    xi: complex = 0j
    degree: int = 1
    z: Optional[complex] = None
    sweep_count: Optional[int] = None
    sweep_radius: float = 1.0
    format: str = "json"
    tol: Optional[float] = None
    out: Optional[str] = None
    figure: Optional[str] = None
    jobs: int = 1
    params_given: bool = False

    @property
    def solver_tol(self) -> float:
        return 1e-10 if self.tol is None else self.tol


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polar-jacobi", description="Polar Jacobi polynomials: coefficients, zeros, checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_sweep=False):
        p.add_argument("--alpha", type=parse_complex, default=None)
        p.add_argument("--beta", type=parse_complex, default=None)
        p.add_argument("--xi", type=parse_complex, default=None)
        p.add_argument("--n", dest="degree", type=int, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=None)
        if with_sweep:
            p.add_argument("--sweep-count", type=int, default=None)
            p.add_argument("--sweep-radius", type=float, default=1.0)
            p.add_argument("--jobs", type=int, default=1)

    common(sub.add_parser("coeffs", help="coefficients, lowest power first"))
    p_eval = sub.add_parser("eval", help="value at a point")
    common(p_eval)
    p_eval.add_argument("--z", type=parse_complex, required=True)
    common(sub.add_parser("roots", help="zeros and location data"), with_sweep=True)
    common(sub.add_parser("verify", help="run the verification suites"))
    p_fig = sub.add_parser("figure", help="zero sets behind the figures, as CSV")
    p_fig.add_argument("figure")
    p_fig.add_argument("--out", default=None)
    p_fig.add_argument("--jobs", type=int, default=1)
    p_fig.add_argument("--tol", type=float, default=None)
    return parser


def _join_complex_args(argv: list[str]) -> list[str]:
    """Turn ``--alpha -0.5+1i`` into ``--alpha=-0.5+1i`` so argparse does not read it as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in COMPLEX_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(_join_complex_args(argv))
    cfg = RunConfig(command=ns.command)
    if ns.command == "figure":
        if ns.figure not in FIGURES:
            raise UsageError(f"unknown figure {ns.figure!r}; choose from {', '.join(FIGURES)}")
        cfg.figure, cfg.out, cfg.jobs, cfg.tol = ns.figure, ns.out, ns.jobs, ns.tol
        return cfg
    given = [v is not None for v in (ns.alpha, ns.beta, ns.xi, ns.degree)]
    cfg.params_given = any(given)
    cfg.alpha = ns.alpha if ns.alpha is not None else 0j
    cfg.beta = ns.beta if ns.beta is not None else 0j
    cfg.xi = ns.xi if ns.xi is not None else 0j
    default_n = 10 if ns.command == "verify" else 1
    cfg.degree = ns.degree if ns.degree is not None else default_n
    cfg.format, cfg.tol, cfg.out = ns.format, ns.tol, ns.out
    cfg.z = getattr(ns, "z", None)
    cfg.sweep_count = getattr(ns, "sweep_count", None)
    cfg.sweep_radius = getattr(ns, "sweep_radius", 1.0)
    cfg.jobs = getattr(ns, "jobs", 1)
    if not 0 <= cfg.degree <= MAX_DEGREE:
        raise UsageError(f"degree must be in 0..{MAX_DEGREE}, got {cfg.degree}")
    if cfg.sweep_count is not None and cfg.sweep_count < 1:
        raise UsageError("--sweep-count must be positive")
    if cfg.tol is not None and not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    return cfg


# ---------------------------------------------------------------------------
# deterministic serialisation

def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    return "0" if s in ("0", "-0") else s


def cpair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def dumps(obj) -> str:
    """JSON with 17 significant digits and insertion-ordered keys."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# commands

def _spec(cfg: RunConfig, xi=None) -> PolarSpec:
    return PolarSpec.of(cfg.alpha, cfg.beta, cfg.xi if xi is None else xi, cfg.degree)


def _header(spec: PolarSpec) -> dict:
    return {
        "n": spec.degree,
        "alpha": cpair(spec.alpha),
        "beta": cpair(spec.beta),
        "xi": cpair(spec.pole),
    }


def cmd_coeffs(cfg: RunConfig) -> tuple[str, int]:
    spec = _spec(cfg)
    p, route = polar_poly_route(spec)
    cross, other = None, None
    if route == "recurrence":
        try:
            cross = pc.coeff_residual(polar_poly_divdiff(spec), p)
            other = "divdiff"
        except DegenerateParams:
            pass
    doc = _header(spec)
    doc.update(
        coeffs=[cpair(c) for c in p],
        route=route,
        cross_check_route=other,
        cross_check_residual=cross,
    )
    if cfg.format == "csv":
        lines = ["k,re,im"] + [f"{k},{_num(c.real)},{_num(c.imag)}" for k, c in enumerate(p)]
        return "\n".join(lines) + "\n", 0
    return dumps(doc) + "\n", 0


def cmd_eval(cfg: RunConfig) -> tuple[str, int]:
    spec = _spec(cfg)
    p, route = polar_poly_route(spec)
    horner = complex(pc.evaluate(p, cfg.z))
    try:
        value = complex(polar_eval(spec, cfg.z)) if cfg.z != spec.pole else horner
    except DegenerateParams:
        value = horner
    doc = _header(spec)
    doc.update(z=cpair(cfg.z), value=cpair(value), coeff_value=cpair(horner), route=route)
    return dumps(doc) + "\n", 0


def _roots_record(spec: PolarSpec, tol: float) -> dict:
    p, route = polar_poly_route(spec)
    zset = find_roots(p, tol) if spec.degree else ZeroSet([], 0)
    zs = zset.roots
    disk = disk_bound_check(zset, spec.pole)
    try:
        level = level_curve_residuals(zset, spec) if zs else []
    except DegenerateParams:
        level = None
    return {
        "zeros": [{"z": cpair(r.location), "mult": r.multiplicity, "residual": r.residual} for r in zs],
        "disk_radius": disk.radius,
        "max_excess": disk.max_excess,
        "level_curve_max_residual": (max(level) if level else 0.0) if level is not None else None,
        "route": route,
    }


def _record_job(args):
    spec, tol = args
    return _roots_record(spec, tol)


def _map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_roots(cfg: RunConfig) -> tuple[str, int]:
    tol = cfg.solver_tol
    if cfg.sweep_count is None:
        spec = _spec(cfg)
        doc = _header(spec)
        doc.update(_roots_record(spec, tol))
        records = [doc]
    else:
        poles = pole_sweep(cfg.sweep_radius, cfg.sweep_count)
        specs = [_spec(cfg, xi) for xi in poles]
        found = _map(_record_job, [(s, tol) for s in specs], cfg.jobs)
        records = []
        for k, (spec, rec) in enumerate(zip(specs, found)):
            doc = {"k": k}
            doc.update(_header(spec))
            doc.update(rec)
            records.append(doc)
    if cfg.format == "csv":
        rows = []
        for i, rec in enumerate(records):
            k = rec.get("k", i)
            for zr in rec["zeros"]:
                rows.append((k, zr["z"][0], zr["z"][1], zr["mult"], zr["residual"]))
        rows.sort(key=lambda r: (r[0], r[1], r[2]))
        lines = ["k,re,im,mult,residual"] + [
            f"{k},{_num(a)},{_num(b)},{m},{_num(r)}" for k, a, b, m, r in rows
        ]
        return "\n".join(lines) + "\n", 0
    body = records[0] if cfg.sweep_count is None else {"records": records}
    return dumps(body) + "\n", 0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    tol = 1e-10
    if cfg.params_given:
        results = spec_suites(cfg.alpha, cfg.beta, cfg.xi, cfg.degree, threshold=cfg.tol, tol=tol)
    else:
        results = default_suites(threshold=cfg.tol, tol=tol)
    doc = {r.name: r.as_dict() for r in results}
    for d in doc.values():
        d.pop("name")
    ok = all(r.passed for r in results)
    return dumps(doc) + "\n", 0 if ok else 4


def _figure_job(args):
    k, spec, tol = args
    p, _ = polar_poly_route(spec)
    return [(k, z.real, z.imag) for z in find_roots(p, tol).expanded()]


def cmd_figure(cfg: RunConfig) -> tuple[str, int]:
    tol = cfg.solver_tol
    jobs = [(k, spec, tol) for k, spec in figure_specs(cfg.figure)]
    rows = [row for part in _map(_figure_job, jobs, cfg.jobs) for row in part]
    rows.sort()
    out = io.StringIO()
    out.write("k,re,im\n")
    for k, a, b in rows:
        out.write(f"{k},{_num(a)},{_num(b)}\n")
    return out.getvalue(), 0


COMMANDS = {
    "coeffs": cmd_coeffs,
    "eval": cmd_eval,
    "roots": cmd_roots,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def _fail(message: str, code: int) -> int:
    one_line = " ".join(str(message).split())
    print(f"error: {one_line}", file=sys.stderr)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except (UsageError, DegreeTooLarge, ValueError) as exc:
        return _fail(exc, 1)
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except DegenerateParams as exc:
        return _fail(f"degenerate parameters: factor {exc.factor} vanishes at n={exc.index}", 2)
    except NoConvergence as exc:
        return _fail(exc, 3)
    except (DegreeTooLarge, ValueError) as exc:
        return _fail(exc, 1)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
