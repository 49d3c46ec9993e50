"""Command-line front end: build a metric family, run checks, write JSON/CSV reports.

Exit codes: 0 all checks pass, 1 some check fails, 2 malformed arguments,
3 domain or constraint error, 4 output path not writable.

Examples::

    qchkahler verify --family flat --n 3
    qchkahler verify --family potential --f log1p --n 3 --seed 7 --json out.json
    qchkahler verify --family rotational --profile sin --check coefficients
    qchkahler transform --family flat --v log1p-r2 --points 4
    qchkahler flatten --family potential --f log1p
    qchkahler meridian --a 1 --samples 100 --csv meridian.csv
    qchkahler rotational --profile ramp --points 6
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .diffgeo_engine import MetricField
from .errors import DomainError
from .metric_families import (
    biconformal_apply,
    biconformally_flat_normal_form,
    canonical_distribution,
    flat_metric,
    make_pair,
    potential_from_name,
    potential_metric,
    radial_data,
    random_normal_form_v,
)
from .radial import RadialScalar
from .rotational import (
    RotationalProfile,
    constant_curvature_meridian,
    meridian_b_values,
    nabla_J_identity_residual,
    rotational_metric,
    warped_curvature,
    warped_curvature_residual,
)
from .structure_verify import (
    DEFAULT_TOLERANCES,
    VerificationReport,
    check_b0_distribution,
    check_b_distribution,
    check_coefficients,
    check_integrability,
    check_qc_invariance,
    check_qch,
    check_ricci_identity,
    check_symmetries,
    classify_value,
    composition_gap,
    decompose_at,
    five_conditions,
    flatten,
    sample_arclengths,
    sample_points,
    tolerance,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4

FAMILIES = ("flat", "potential", "normal-form", "rotational")
PROFILES = ("sin", "ramp", "linear", "tangent", "const")
CHECKS = ("symmetries", "qch", "ricci", "b", "b0", "integrability", "coefficients")
DEFAULT_CHECKS = {
    "flat": ("symmetries", "qch", "b", "b0"),
    "potential": ("symmetries", "qch", "ricci", "b", "b0"),
    "normal-form": ("symmetries", "qch", "ricci", "b", "b0"),
    "rotational": ("symmetries", "qch", "ricci", "b0", "integrability", "coefficients"),
}
V_CHOICES = ("log1p-r2", "random", "polynomial", "zero")


class UsageError(Exception):
    """Arguments that parse but do not make sense together."""


# ---------------------------------------------------------------- argument parsing

def _tol_pair(text: str) -> tuple:
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VAL, got {text!r}")
    if key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"unknown tolerance {key!r}; known: {', '.join(sorted(DEFAULT_TOLERANCES))}")
    try:
        num = float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key} needs a number, got {val!r}") from None
    if not num > 0:
        raise argparse.ArgumentTypeError(f"tolerance {key} must be positive")
    return key, num


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _add_common(p: argparse.ArgumentParser, points: int = 5) -> None:
    p.add_argument("--n", type=_positive_int, default=3, help="complex dimension (default 3)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled points")
    p.add_argument("--points", type=_positive_int, default=points, help="number of sample points")
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="KEY=VAL",
                   help="override a tolerance (repeatable)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--csv", metavar="PATH", help="write a CSV table here")


def _add_family(p: argparse.ArgumentParser, families: Sequence[str] = FAMILIES, default: str = "flat") -> None:
    p.add_argument("--family", choices=families, default=default)
    p.add_argument("--f", default="log1p", help="potential name: linear, quadratic, log1p, polynomial")
    p.add_argument("--coeffs", type=float, nargs="+", help="coefficients for --f polynomial (1, rho, rho^2, ...)")
    p.add_argument("--profile", choices=PROFILES, default="sin", help="meridian profile of a rotational family")
    p.add_argument("--a", type=float, default=1.0, help="holomorphic curvature for --profile const")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchkahler", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run structural checks on a metric family")
    _add_family(p)
    p.add_argument("--check", action="append", choices=CHECKS, help="checks to run (repeatable)")
    _add_common(p)

    p = sub.add_parser("decompose", help="print (a, b, c), k and p* at sample points")
    _add_family(p)
    _add_common(p)

    p = sub.add_parser("transform", help="apply a biconformal transformation and test its invariants")
    _add_family(p, ("flat", "potential"))
    p.add_argument("--v", choices=V_CHOICES, default="log1p-r2",
                   help="v(rho): log1p-r2 gives e^{2v} = 1 + r^2; random uses --seed")
    p.add_argument("--v-coeffs", type=float, nargs="+", help="coefficients of v for --v polynomial")
    _add_common(p, points=4)

    p = sub.add_parser("flatten", help="construct the pair that flattens a QCH radial metric")
    _add_family(p, default="potential")
    _add_common(p, points=10)

    p = sub.add_parser("meridian", help="sample the constant holomorphic curvature meridian")
    p.add_argument("--a", type=float, required=True, help="holomorphic curvature a > 0")
    p.add_argument("--samples", type=_positive_int, default=100)
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="KEY=VAL")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")

    p = sub.add_parser("rotational", help="closed forms of a rotational hypersurface against numerics")
    p.add_argument("--profile", choices=PROFILES, default="sin")
    p.add_argument("--a", type=float, default=1.0)
    _add_common(p, points=5)
    return parser


# ---------------------------------------------------------------- families

def make_profile(name: str, a: float = 1.0) -> RotationalProfile:
    if name == "sin":
        return RotationalProfile.sine()
    if name == "ramp":
        return RotationalProfile.ramp()
    if name == "linear":
        return RotationalProfile.linear()
    if name == "tangent":
        return RotationalProfile.tangent_at_zero()
    if name == "const":
        return RotationalProfile.constant_curvature(a)
    raise UsageError(f"unknown profile {name!r}")


def make_family(args) -> tuple:
    """(field, profile or None) for the family selected on the command line."""
    fam = args.family
    if fam == "flat":
        return flat_metric(args.n), None
    if fam == "potential":
        try:
            f = potential_from_name(args.f, args.coeffs)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return potential_metric(f, args.n), None
    if fam == "normal-form":
        return biconformally_flat_normal_form(random_normal_form_v(args.seed), args.n), None
    profile = make_profile(args.profile, args.a)
    return rotational_metric(profile, args.n), profile


def family_points(field_: MetricField, profile: Optional[RotationalProfile], count: int, seed: int) -> list:
    if profile is None:
        return sample_points(field_, count, seed)
    chart = radial_data(field_).extras["chart"]
    rng = np.random.default_rng(seed)
    return [chart.point(float(s), rng.normal(size=field_.dim)) for s in sample_arclengths(profile, count)]


def _v_function(args) -> RadialScalar:
    if args.v == "log1p-r2":
        return 0.5 * (1 + RadialScalar.rho()).log()
    if args.v == "random":
        return random_normal_form_v(args.seed)
    if args.v == "zero":
        return RadialScalar.constant(0.0)
    if not args.v_coeffs:
        raise UsageError("--v polynomial needs --v-coeffs")
    return RadialScalar.polynomial(list(args.v_coeffs))


# ---------------------------------------------------------------- output

def _clean(x):
    """JSON-safe copy with numpy scalars unwrapped and non-finite floats as null."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15g")
    return str(x)


def render_json(config: dict, reports: Sequence[VerificationReport], extra: Optional[dict] = None) -> str:
    failed = [r.name for r in reports if not r.passed]
    doc = {
        "config": config,
        "checks": [r.to_dict() for r in reports],
        "summary": {"checks": len(reports), "passed": len(reports) - len(failed),
                    "failed": failed, "verdict": "fail" if failed else "pass"},
    }
    if extra:
        doc.update(extra)
    return json.dumps(_clean(doc), indent=2, ensure_ascii=False) + "\n"


def render_csv(rows: Sequence[dict]) -> str:
    keys: list = []
    for row in rows:
        keys.extend(k for k in row if k not in keys)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for row in rows:
        w.writerow([_fmt(row.get(k, "")) for k in keys])
    return buf.getvalue()


def report_rows(reports: Sequence[VerificationReport]) -> list:
    return [{"check": r.name, "point": i, "residual": res, "tolerance": r.tolerance,
             "verdict": "pass" if res <= r.tolerance else "fail"}
            for r in reports for i, res in enumerate(r.residuals)]


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "csv", "tol")}
    cfg["tolerances"] = {**DEFAULT_TOLERANCES, **dict(args.tol)}
    return cfg


def _emit(args, reports, rows=None, extra=None) -> int:
    _write(args.json, render_json(_config(args), reports, extra))
    _write(args.csv, render_csv(rows if rows is not None else report_rows(reports)))
    if "-" not in (args.json, args.csv):
        for r in reports:
            line = f"{r.name:<24} {r.verdict:<4}  max residual {r.max_residual:.3e}  (tol {r.tolerance:.1e})"
            print(line + (f"  [{r.note}]" if r.note else ""))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    g, profile = make_family(args)
    dist = canonical_distribution(g)
    pts = family_points(g, profile, args.points, args.seed)
    ov = dict(args.tol)
    checks = args.check or DEFAULT_CHECKS[args.family]
    reports = []
    for name in dict.fromkeys(checks):
        if name == "symmetries":
            reports.append(check_symmetries(g, dist, pts, tolerance("symmetry", ov)))
        elif name == "qch":
            reports.append(check_qch(g, dist, pts, tolerance("qch", ov)))
        elif name == "ricci":
            reports.append(check_ricci_identity(g, dist, pts, tolerance("ricci", ov)))
        elif name == "b":
            reports.append(check_b_distribution(g, dist, pts, tolerance("b_distribution", ov),
                                                tolerance("k_min", ov)))
        elif name == "b0":
            reports.append(check_b0_distribution(g, dist, pts, tolerance("b0", ov)))
        elif name == "integrability":
            reports.append(check_integrability(g, dist, pts, tolerance("integrability", ov)))
        elif name == "coefficients":
            if profile is None:
                raise UsageError("--check coefficients needs --family rotational")
            reports.append(check_coefficients(profile, args.n, sample_arclengths(profile, args.points),
                                              args.seed, tolerance("coefficients", ov), field_=g))
    return _emit(args, reports)


def cmd_decompose(args) -> int:
    g, profile = make_family(args)
    dist = canonical_distribution(g)
    pts = family_points(g, profile, args.points, args.seed)
    tol = tolerance("qch", dict(args.tol))
    dz = tolerance("dead_zone", dict(args.tol))
    rows, res = [], []
    for i, p in enumerate(pts):
        co = decompose_at(g, dist, p)
        res.append(co.residual / max(co.extras["norm"], 1.0))
        rows.append({"point": i, "r": float(np.linalg.norm(p)), "a": co.a, "b": co.b, "c": co.c,
                     "k": co.k, "p_star": co.p_star, "tau": co.tau, "sigma": co.sigma, "kappa": co.kappa,
                     "residual": res[-1], "class": classify_value(co.a, co.k, dz).value})
    rep = VerificationReport("decomposition", "QCH curvature form R = a pi + b Phi + c Psi",
                             pts, res, tol, rows)
    code = _emit(args, [rep], rows)
    if args.json != "-" and args.csv != "-":
        for row in rows:
            print("  r={r:.4f}  a={a:.10g}  b={b:.10g}  c={c:.10g}  k={k:.10g}  p*={p_star:.10g}  [{class}]".format(**row))
    return code


def cmd_transform(args) -> int:
    src, _ = make_family(args)
    ov = dict(args.tol)
    v = _v_function(args)
    pair = make_pair(src, v)
    g1 = biconformal_apply(src, None, pair)
    pts = sample_points(src, args.points, args.seed)
    rep = check_qc_invariance(src, g1, pair, pts, tolerance("qc_invariance", ov), tolerance("cor57", ov))
    second = make_pair(g1, random_normal_form_v(args.seed + 1))
    gap = composition_gap(src, pair, second, pts)
    comp = VerificationReport("composition", "composition of biconformal transformations",
                              pts, [gap], tolerance("composition", ov))
    rows = [{"point": i, "r": float(np.linalg.norm(p)), **val} for i, (p, val) in enumerate(zip(pts, rep.values))]
    return _emit(args, [rep, comp], rows)


def cmd_flatten(args) -> int:
    g, _ = make_family(args)
    pts = sample_points(g, args.points, args.seed)
    pair, rep = flatten(g, None, pts, tolerance("flatness", dict(args.tol)))
    rows = [{"point": i, "r": float(np.linalg.norm(p)), "u": pair.u(float(p @ p)), "v": pair.v(float(p @ p)),
             "residual": res} for i, (p, res) in enumerate(zip(pts, rep.residuals))]
    return _emit(args, [rep], rows)


def cmd_meridian(args) -> int:
    if not args.a > 0:
        raise DomainError(f"meridian needs a > 0, got {args.a}")
    curve = constant_curvature_meridian(args.a, args.samples)
    xs = [x for x, _ in curve]
    bs = meridian_b_values(args.a, xs)
    tol = tolerance("meridian_b", dict(args.tol))
    rows = [{"x": x, "y": y, "b": b} for (x, y), b in zip(curve, bs)]
    rep = VerificationReport("meridian_b_zero", "b = 0 along the constant holomorphic curvature meridian",
                             [[x, y] for x, y in curve], [abs(b) for b in bs], tol,
                             note=f"domain 0 < x < {2 / math.sqrt(args.a):.12g}")
    if args.csv is None:
        args.csv = "-" if args.json != "-" else None
    return _emit(args, [rep], rows)


def cmd_rotational(args) -> int:
    profile = make_profile(args.profile, args.a)
    g = rotational_metric(profile, args.n)
    ov = dict(args.tol)
    ss = sample_arclengths(profile, args.points)
    coef = check_coefficients(profile, args.n, ss, args.seed, tolerance("coefficients", ov), field_=g)
    warp = [warped_curvature_residual(profile, float(s), args.n) for s in ss]
    nj = [nabla_J_identity_residual(profile, float(s), args.n) for s in ss]
    pts = coef.points
    reports = [
        coef,
        VerificationReport("warped_curvature", "curvature of the induced warped metric", pts, warp,
                           tolerance("coefficients", ov)),
        VerificationReport("nabla_J", "covariant derivative of J for the induced metric", pts, nj,
                           tolerance("coefficients", ov)),
    ]
    rows = []
    for s, val in zip(ss, coef.values):
        K1, K2 = warped_curvature(profile, float(s))
        rows.append({**val, "K1": K1, "K2": K2, **five_conditions(profile, float(s), args.n)})
    return _emit(args, reports, rows)


COMMANDS = {
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "transform": cmd_transform,
    "flatten": cmd_flatten,
    "meridian": cmd_meridian,
    "rotational": cmd_rotational,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
