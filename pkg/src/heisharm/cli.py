"""Command-line front end: ``heisharm {classify, defect, average, numeric ...}``.

Exit codes: 0 success, 2 usage, 3 domain error, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__
from .group import DomainError, RealPoint, ball_volume
from .harmonics import HarmonicIndex, spherical_harmonic
from .mvp import (AVERAGE_VARS, CSV_COLUMNS, InvariantViolation, ball_average,
                  classify_up_to_degree, default_parallelism, harmonicity_defect)
from .poly import HPoly, ParseError, Poly, parse_hpoly
from .scalars import I
from .quadrature import (BUMP_KINDS, QuadratureFailure, QuadratureSpec, kernel_mvp_ratio,
                         mollifier_convolve, quad_ball, quad_ball_with_error,
                         three_spheres_check)

EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 2, 3, 4
FORMATS = ("json", "csv", "table")


class UsageError(Exception):
    """Bad or inconsistent command-line input."""


@dataclass
class ReportDocument:
    command: str
    params: Dict[str, Any]
    result: Any
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))


# -- argument helpers ------------------------------------------------------

def _triple(text: str) -> List[Fraction]:
    try:
        parts = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected three numbers like 1,0.5,1/3; got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return parts


def _number(text: str) -> float:
    try:
        value = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    return value


def _add_target(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--poly", help="polynomial in z, zbar, t with constants i, pi")


def _target(args) -> tuple[str, HPoly, Optional[HarmonicIndex]]:
    given = [v is not None for v in (args.k, args.l, args.m)]
    if args.poly is not None:
        if any(given):
            raise UsageError("give either --poly or --k/--l/--m, not both")
        try:
            P = parse_hpoly(args.poly)
        except ParseError as exc:
            raise UsageError(str(exc)) from None
        return args.poly, P, None
    if not all(given):
        raise UsageError("need --k, --l and --m (or --poly)")
    idx = HarmonicIndex(args.k, args.l, args.m)
    return f"P^{idx.m}_{{{idx.k},{idx.l}}}", spherical_harmonic(idx), idx


def _xyt_form(p: Poly) -> str:
    """Rewrite a polynomial in ``(z0, zbar0, t0, R)`` over ``(x0, y0, t0, R)``."""
    V = ("x0", "y0", "t0", "R")
    x0, y0 = Poly.variable(V, "x0"), Poly.variable(V, "y0")
    return str(p.substitute({"z0": x0 + y0 * I, "zbar0": x0 - y0 * I}, V))


def _spec(args) -> QuadratureSpec:
    o = args.order
    return QuadratureSpec(o, o, o)


# -- commands --------------------------------------------------------------

def cmd_classify(args) -> ReportDocument:
    if args.max_degree < 0:
        raise UsageError("--max-degree must be >= 0")
    parallel = args.parallel if args.parallel is not None else default_parallelism()
    rows = classify_up_to_degree(args.max_degree, parallel)
    result = {
        "rows": [asdict(r) for r in rows],
        "strongly_harmonic_iff_m_le_1": all(r.strongly_harmonic == (r.m <= 1) for r in rows),
        "non_strongly_harmonic": [f"({r.k},{r.l},{r.m})" for r in rows if not r.strongly_harmonic],
    }
    return ReportDocument("classify", {"max_degree": args.max_degree}, result)


def cmd_defect(args) -> ReportDocument:
    label, P, idx = _target(args)
    report = harmonicity_defect(P, label)
    result = {
        "polynomial": str(P),
        "defect": str(report.defect),
        "defect_xyt": _xyt_form(report.defect),
        "strongly_harmonic": report.is_strongly_harmonic,
    }
    return ReportDocument("defect", _target_params(args, idx), result)


def cmd_average(args) -> ReportDocument:
    label, P, idx = _target(args)
    avg = ball_average(P)
    result: Dict[str, Any] = {"polynomial": str(P), "average": str(avg),
                              "variables": list(AVERAGE_VARS)}
    params = _target_params(args, idx)
    if args.center is not None:
        x, y, t = args.center
        z0 = complex(float(x), float(y))
        values = {"z0": z0, "zbar0": z0.conjugate(), "t0": float(t), "R": args.radius}
        value = complex(avg.evaluate_numeric(values))
        result["value"] = {"re": value.real, "im": value.imag}
        params.update(center=[str(c) for c in args.center], radius=args.radius)
    return ReportDocument("average", params, result)


def _target_params(args, idx) -> Dict[str, Any]:
    if idx is not None:
        return {"k": idx.k, "l": idx.l, "m": idx.m}
    return {"poly": args.poly}


def _parts(P: HPoly, which: str):
    parts = []
    if which in ("real", "both"):
        parts.append(("real", HPoly.from_poly(P.real_part())))
    if which in ("imag", "both"):
        parts.append(("imag", HPoly.from_poly(P.imag_part())))
    return parts


def cmd_kernel_mvp(args) -> ReportDocument:
    label, P, idx = _target(args)
    center = RealPoint(*(float(c) for c in args.center))
    out = []
    for name, part in _parts(P, args.part):
        res = kernel_mvp_ratio(part, center, args.radius, _spec(args))
        out.append({"part": name, "ratio": res.ratio, "point_value": res.point_value,
                    "abs_diff": res.discrepancy, "abs_error_estimate": res.abs_error_estimate})
    params = _target_params(args, idx)
    params.update(center=[str(c) for c in args.center], radius=args.radius, order=args.order)
    return ReportDocument("numeric kernel-mvp", params, {"checks": out})


def cmd_three_spheres(args) -> ReportDocument:
    label, P, idx = _target(args)
    if len(args.radii) != 3:
        raise UsageError("--radii needs r1,r,r2")
    out = []
    for name, part in _parts(P, args.part):
        res = three_spheres_check(part, [float(r) for r in args.radii], args.samples)
        out.append({"part": name, "radii": list(res.radii), "M": list(res.M), "rhs": res.rhs,
                    "margin": res.margin, "satisfied": res.satisfied})
    params = _target_params(args, idx)
    params.update(radii=[str(r) for r in args.radii], samples=args.samples)
    return ReportDocument("numeric three-spheres", params, {"checks": out})


def cmd_mollify(args) -> ReportDocument:
    label, P, idx = _target(args)
    p = RealPoint(*(float(c) for c in args.center))
    out = []
    for name, part in _parts(P, args.part):
        value = mollifier_convolve(part, p, args.eps, args.kind, _spec(args))
        point = float(part.evaluate(p).real)
        out.append({"part": name, "convolution": value, "point_value": point,
                    "abs_diff": abs(value - point)})
    params = _target_params(args, idx)
    params.update(center=[str(c) for c in args.center], eps=args.eps, kind=args.kind,
                  order=args.order)
    return ReportDocument("numeric mollify", params, {"checks": out})


def cmd_quad_check(args) -> ReportDocument:
    center = RealPoint(*(float(c) for c in args.center))
    R = args.radius
    spec = _spec(args)
    volume, err = quad_ball_with_error(1.0, center, R, spec)
    exact = ball_volume(R)
    result: Dict[str, Any] = {"volume": volume, "exact_volume": exact,
                              "relative_error": abs(volume - exact) / exact,
                              "abs_error_estimate": err}
    params: Dict[str, Any] = {"radius": R, "center": [str(c) for c in args.center],
                              "order": args.order}
    if args.poly is not None:
        try:
            P = parse_hpoly(args.poly)
        except ParseError as exc:
            raise UsageError(str(exc)) from None
        avg = ball_average(P)
        z0 = complex(center.x, center.y)
        exact_mean = complex(avg.evaluate_numeric(
            {"z0": z0, "zbar0": z0.conjugate(), "t0": center.t, "R": R})).real
        numeric_mean = quad_ball(HPoly.from_poly(P), center, R, spec) / exact
        result.update(exact_mean_real=exact_mean, numeric_mean_real=numeric_mean,
                      mean_relative_error=abs(exact_mean - numeric_mean) / max(abs(exact_mean), 1e-300))
        params["poly"] = args.poly
    return ReportDocument("numeric quad-check", params, result)


# -- rendering -------------------------------------------------------------

def render(doc: ReportDocument, fmt: str) -> str:
    if fmt == "json":
        return doc.to_json() + "\n"
    if fmt == "csv":
        return _render_csv(doc)
    return _render_table(doc)


def _render_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if doc.command == "classify":
        writer.writerow(CSV_COLUMNS)
        for row in doc.result["rows"]:
            writer.writerow([row[c] for c in CSV_COLUMNS])
    elif isinstance(doc.result, dict) and "checks" in doc.result:
        checks = doc.result["checks"]
        keys = list(checks[0]) if checks else []
        writer.writerow(keys)
        for c in checks:
            writer.writerow([c[k] for k in keys])
    else:
        writer.writerow(["key", "value"])
        for k, v in doc.result.items():
            writer.writerow([k, v])
    return buf.getvalue()


def _render_table(doc: ReportDocument) -> str:
    lines = [f"# {doc.command}  " + "  ".join(f"{k}={v}" for k, v in doc.params.items())]
    if doc.command == "classify":
        header = ("k", "l", "m", "degree", "strong", "L-B", "defect leading term")
        rows = [(r["k"], r["l"], r["m"], r["degree"], "yes" if r["strongly_harmonic"] else "no",
                 "0" if r["laplace_beltrami_zero"] else "nonzero", r["defect_leading_term"])
                for r in doc.result["rows"]]
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        for row in (header, *rows):
            lines.append("  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip())
        lines.append(f"strongly harmonic <=> m <= 1: {doc.result['strongly_harmonic_iff_m_le_1']}")
    elif "checks" in doc.result:
        for c in doc.result["checks"]:
            lines.append("  ".join(f"{k}={v}" for k, v in c.items()))
    else:
        for k, v in doc.result.items():
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisharm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="strong-harmonicity table of the basis")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--parallel", type=int, help="worker processes (default: $HH_PARALLEL or cores)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("defect", parents=[common], help="exact ball average minus point value")
    _add_target(p)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("average", parents=[common], help="exact ball average")
    _add_target(p)
    p.add_argument("--center", type=_triple)
    p.add_argument("--radius", type=_number, default=1.0)
    p.set_defaults(func=cmd_average)

    num = sub.add_parser("numeric", help="quadrature-based checks")
    nsub = num.add_subparsers(dest="numeric_command", required=True)
    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--order", type=int, default=64, help="Gauss-Legendre nodes per axis")

    p = nsub.add_parser("kernel-mvp", parents=[common, quad])
    _add_target(p)
    p.add_argument("--center", type=_triple, required=True)
    p.add_argument("--radius", type=_number, required=True)
    p.add_argument("--part", choices=("real", "imag", "both"), default="both")
    p.set_defaults(func=cmd_kernel_mvp)

    p = nsub.add_parser("three-spheres", parents=[common])
    _add_target(p)
    p.add_argument("--radii", type=lambda s: [_number(v) for v in s.split(",")], required=True)
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--part", choices=("real", "imag", "both"), default="real")
    p.set_defaults(func=cmd_three_spheres)

    p = nsub.add_parser("mollify", parents=[common, quad])
    _add_target(p)
    p.add_argument("--center", type=_triple, required=True)
    p.add_argument("--eps", type=_number, required=True)
    p.add_argument("--kind", choices=BUMP_KINDS, default="exp_bump")
    p.add_argument("--part", choices=("real", "imag", "both"), default="both")
    p.set_defaults(func=cmd_mollify)

    p = nsub.add_parser("quad-check", parents=[common, quad])
    p.add_argument("--radius", type=_number, required=True)
    p.add_argument("--center", type=_triple, default=[Fraction(0)] * 3)
    p.add_argument("--poly", help="also compare exact and numeric mean of this polynomial")
    p.set_defaults(func=cmd_quad_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("table" if sys.stdout.isatty() and not args.out else "json")
    try:
        doc = args.func(args)
        text = render(doc, fmt)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc}") from None
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"heisharm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ZeroDivisionError) as exc:
        print(f"heisharm: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (QuadratureFailure, InvariantViolation, FloatingPointError) as exc:
        name = " ".join(filter(None, (args.command, getattr(args, "numeric_command", None))))
        print(f"heisharm: numeric failure in {name}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
