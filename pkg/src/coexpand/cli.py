"""Command-line front end.

Commands: parse, chi, schwarzian, fixpoints, critpoints, certify, glue,
singer, reproduce.  Exit codes: 0 success/Certified, 1 Falsified (witness
printed), 2 Unknown/Unresolved, 64 usage error, 65 parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .certify import CERTIFIED, FALSIFIED, UNKNOWN, CertifyParams, certify_membership
from .chi import chi, schwarzian
from .classify import classify_fixed_set
from .errors import (
    CoexpandError,
    CriticalPoint,
    DiagonalInput,
    DomainViolation,
    NotGlueable,
    ParseError,
    PreconditionUnmet,
    SeamPoint,
    ValueCollision,
)
from .expr import FunctionExpr, compose, glue
from .glueable import glueable_check
from .interval import Interval
from .parser import format_expr, parse
from .plotting import render_figure, sample_function, write_csv
from .report import (
    Report,
    certificate_dict,
    crit_report_dict,
    fix_set_dict,
    fixed_point_dict,
    glueable_dict,
    interval_dict,
    singer_dict,
)
from .roots import critical_points, fixed_points_ex
from .singer import singer_check

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2
        raise _UsageExit(message)


def _domain_arg(text: str) -> Interval:
    try:
        lo_s, hi_s = text.split(",")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise _UsageExit(f"--domain expects 'a,b', got {text!r}") from None
    if not lo < hi:
        raise _UsageExit(f"--domain expects a < b, got {text!r}")
    return Interval(lo, hi)


def _pair_arg(text: str) -> tuple[float, float]:
    try:
        x_s, y_s = text.split(",")
        return float(x_s), float(y_s)
    except ValueError:
        raise _UsageExit(f"expected 'x,y', got {text!r}") from None


def _build_parser() -> _ArgumentParser:
    top = _ArgumentParser(prog="coexpand",
                          description="Certified analysis of scalar maps under the "
                                      "coexpansion functional.")
    top.add_argument("--version", action="version", version=f"coexpand {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, domain_required=True):
        p.add_argument("--domain", type=_domain_arg, required=domain_required,
                       metavar="A,B", help="closed analysis window")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--csv", metavar="PATH", help="write sampled values as CSV")
        p.add_argument("--svg", metavar="PATH", help="render a figure (matplotlib)")
        p.add_argument("--depth", type=int, default=None, help="max subdivision depth")
        p.add_argument("--delta", type=float, default=None, help="diagonal band half-width")
        p.add_argument("--budget", type=int, default=None, help="box/work budget")
        p.add_argument("--tol", type=float, default=None, help="tolerance/margin")

    p = sub.add_parser("parse", help="parse an expression and print its canonical form")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("chi", help="coexpansion functional at a pair of points")
    p.add_argument("expr")
    p.add_argument("--at", type=_pair_arg, required=True, metavar="X,Y")
    common(p, domain_required=False)

    p = sub.add_parser("schwarzian", help="Schwarzian derivative at a point or sampled")
    p.add_argument("expr")
    p.add_argument("--at", type=float, default=None, metavar="X")
    common(p, domain_required=False)

    p = sub.add_parser("fixpoints", help="isolate fixed points with stability")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("critpoints", help="isolate critical points and components")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("certify", help="certify or falsify nowhere-coexpansion")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("glue", help="validate gluing hypotheses and construct the glue")
    p.add_argument("left")
    p.add_argument("right")
    common(p)

    p = sub.add_parser("singer", help="attracting orbits vs critical orbits harness")
    p.add_argument("expr")
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--iters", type=int, default=1000)
    common(p)

    p = sub.add_parser("reproduce", help="regenerate the stock figures and assertions")
    p.add_argument("target", choices=["fig1", "fig2", "counterexample", "elu"])
    p.add_argument("--outdir", default="reproduce_out")
    p.add_argument("--json", action="store_true")

    return top


def _certify_params(args) -> CertifyParams:
    base = CertifyParams()
    return CertifyParams(
        max_depth=args.depth if args.depth is not None else base.max_depth,
        diag_band=args.delta if args.delta is not None else base.diag_band,
        point_margin=args.tol if args.tol is not None else base.point_margin,
        budget=args.budget if args.budget is not None else base.budget,
    )


def _emit(report: Report, args, text_lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(report.to_json())
    else:
        for line in text_lines:
            print(line)


def _files(args, f: FunctionExpr, window: Interval, transform=None,
           header=("x", "f(x)"), ylabel="f(x)", diagonal=True, title="") -> None:
    if not (getattr(args, "csv", None) or getattr(args, "svg", None)):
        return
    rows = sample_function(f, window, transform=transform)
    if args.csv:
        write_csv(args.csv, rows, header=header)
    if args.svg:
        render_figure(args.svg, rows, title=title, diagonal=diagonal, ylabel=ylabel)


# ----------------------------------------------------------------------
# command handlers
# ----------------------------------------------------------------------


def _cmd_parse(args) -> int:
    f = parse(args.expr)
    text = format_expr(f)
    report = Report("parse", args.expr, None, {"formatted": text})
    _emit(report, args, [text])
    return EXIT_OK


def _cmd_chi(args) -> int:
    f = parse(args.expr)
    x, y = args.at
    t0 = time.perf_counter()
    value = chi(f, x, y)
    report = Report("chi", args.expr, args.domain,
                    {"x": x, "y": y, "chi": value, "coexpanding": value > 1.0},
                    wall_time=time.perf_counter() - t0)
    if args.domain:
        _files(args, f, args.domain)
    _emit(report, args, [f"chi({x}, {y}) = {value!r}"
                         + ("  [coexpanding pair]" if value > 1.0 else "")])
    return EXIT_OK


def _cmd_schwarzian(args) -> int:
    f = parse(args.expr)
    if args.at is None and args.domain is None:
        raise _UsageExit("schwarzian requires --at X and/or --domain A,B")
    t0 = time.perf_counter()
    results = {}
    lines = []
    if args.at is not None:
        value = schwarzian(f, args.at)
        results["x"] = args.at
        results["schwarzian"] = value
        lines.append(f"S_f({args.at}) = {value!r}")
    if args.domain is not None:
        _files(args, f, args.domain, transform=schwarzian,
               header=("x", "S_f(x)"), ylabel="S_f(x)", diagonal=False,
               title=f"Schwarzian of {format_expr(f)}")
        results["window"] = interval_dict(args.domain)
    report = Report("schwarzian", args.expr, args.domain, results,
                    wall_time=time.perf_counter() - t0)
    _emit(report, args, lines or ["samples written"])
    return EXIT_OK


def _cmd_fixpoints(args) -> int:
    f = parse(args.expr)
    t0 = time.perf_counter()
    depth = args.depth if args.depth is not None else 52
    points, unresolved = fixed_points_ex(f, args.domain, depth=depth)
    report = Report("fixpoints", args.expr, args.domain,
                    {"points": [fixed_point_dict(p) for p in points],
                     "unresolved": [interval_dict(u) for u in unresolved]},
                    params={"depth": depth},
                    wall_time=time.perf_counter() - t0)
    lines = [f"{len(points)} fixed point(s) on [{args.domain.lo}, {args.domain.hi}]"]
    for p in points:
        lines.append(f"  x = {p.location:.12g}  in [{p.isolating.lo!r}, {p.isolating.hi!r}]"
                     f"  multiplier [{p.multiplier.lo:.6g}, {p.multiplier.hi:.6g}]"
                     f"  {p.stability.value}")
    for u in unresolved:
        lines.append(f"  unresolved region [{u.lo!r}, {u.hi!r}]")
    _files(args, f, args.domain)
    _emit(report, args, lines)
    return EXIT_UNKNOWN if unresolved else EXIT_OK


def _cmd_critpoints(args) -> int:
    f = parse(args.expr)
    t0 = time.perf_counter()
    depth = args.depth if args.depth is not None else 52
    rep = critical_points(f, args.domain, depth=depth)
    report = Report("critpoints", args.expr, args.domain, crit_report_dict(rep),
                    params={"depth": depth}, wall_time=time.perf_counter() - t0)
    lines = [f"status: {rep.status}" + (f" ({rep.reason})" if rep.reason else "")]
    for iso in rep.isolating:
        lines.append(f"  critical point in [{iso.lo!r}, {iso.hi!r}]")
    lines.append(f"  {len(rep.components)} component(s) of the window minus Crit(f)")
    _files(args, f, args.domain)
    _emit(report, args, lines)
    return EXIT_OK if rep.complete else EXIT_UNKNOWN


def _certificate_lines(cert) -> list[str]:
    lines = [f"verdict: {cert.verdict}"]
    if cert.verdict == FALSIFIED:
        x, y = cert.witness
        lines.append(f"  witness pair: x = {x!r}, y = {y!r}")
        lines.append(f"  rigorous chi lower bound: {cert.chi_lower_bound!r} > 1")
    if cert.verdict == UNKNOWN:
        lines.append(f"  {len(cert.frontier)} undischarged box(es) in the frontier")
    lines.append(f"  components analysed: {len(cert.components)}; "
                 f"work units: {cert.boxes_processed}; wall time {cert.wall_time:.3f}s")
    return lines


def _cmd_certify(args) -> int:
    f = parse(args.expr)
    params = _certify_params(args)
    cert = certify_membership(f, args.domain, params)
    report = Report("certify", args.expr, args.domain, certificate_dict(cert),
                    params={"max_depth": params.max_depth, "diag_band": params.diag_band,
                            "point_margin": params.point_margin, "budget": params.budget},
                    wall_time=cert.wall_time)
    _files(args, f, args.domain)
    _emit(report, args, _certificate_lines(cert))
    if cert.verdict == CERTIFIED:
        return EXIT_OK
    if cert.verdict == FALSIFIED:
        return EXIT_FALSIFIED
    return EXIT_UNKNOWN


def _cmd_glue(args) -> int:
    left = parse(args.left)
    right = parse(args.right)
    t0 = time.perf_counter()
    window = args.domain
    left_res = glueable_check(left, window)
    right_res = glueable_check(right, window)
    lines = [
        f"left  {format_expr(left)}: {left_res.verdict}"
        + (f" ({left_res.reason})" if left_res.reason else ""),
        f"right {format_expr(right)}: {right_res.verdict}"
        + (f" ({right_res.reason})" if right_res.reason else ""),
    ]
    results = {"left": glueable_dict(left_res), "right": glueable_dict(right_res)}
    code = EXIT_OK
    glued_text = None
    try:
        glued = glue(left, right)
        glued_text = format_expr(glued)
        lines.append(f"glued: {glued_text}")
    except NotGlueable as e:
        lines.append(f"not glueable: {e}")
        code = EXIT_FALSIFIED if "cannot certify" not in str(e) else EXIT_UNKNOWN
    results["glued"] = glued_text
    report = Report("glue", f"{args.left} | {args.right}", window, results,
                    wall_time=time.perf_counter() - t0)
    _emit(report, args, lines)
    return code


def _cmd_singer(args) -> int:
    f = parse(args.expr)
    t0 = time.perf_counter()
    tol = args.tol if args.tol is not None else 1e-6
    rep = singer_check(f, args.domain, max_period=args.max_period,
                       iters=args.iters, tol=tol)
    report = Report("singer", args.expr, args.domain, singer_dict(rep),
                    params={"max_period": args.max_period, "iters": args.iters, "tol": tol},
                    wall_time=time.perf_counter() - t0)
    lines = [f"{len(rep.orbits)} attracting orbit(s); "
             f"{len(rep.critical_points)} critical point(s)"]
    for o in rep.orbits:
        basin = f"[{o.basin.lo:.6g}, {o.basin.hi:.6g}]"
        edge = ("window boundary: "
                + ("both sides" if o.hits_lower and o.hits_upper
                   else "lower" if o.hits_lower else "upper" if o.hits_upper else "no"))
        lines.append(f"  p = {o.point:.10g} period {o.period} basin {basin} ({edge}); "
                     f"attracted critical points: {list(o.attracted_critical_points) or 'none'}")
    if rep.alarm:
        lines.append("ALARM: dichotomy violated for some orbit")
    _files(args, f, args.domain)
    _emit(report, args, lines)
    return EXIT_FALSIFIED if rep.alarm else EXIT_OK


# ----------------------------------------------------------------------
# reproduce targets
# ----------------------------------------------------------------------


def _fig2_expression() -> FunctionExpr:
    f = parse("tanh(4*x) + tanh(x/4)")
    s = 0.94
    inner = compose(f, parse(f"x + {s!r}")) - 2.0 * s
    return 4.0 * compose(f, inner) + (s + 4.0)


def _cmd_reproduce(args) -> int:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    lines: list[str] = []
    results: dict = {"target": args.target, "files": []}
    ok = True
    t0 = time.perf_counter()

    def emit_files(name: str, f: FunctionExpr, window: Interval, transform=None,
                   header=("x", "f(x)"), ylabel="f(x)", diagonal=True, title="") -> None:
        rows = sample_function(f, window, transform=transform)
        csv_path = out / f"{name}.csv"
        svg_path = out / f"{name}.svg"
        write_csv(csv_path, rows, header=header)
        render_figure(svg_path, rows, title=title, diagonal=diagonal, ylabel=ylabel)
        results["files"] += [str(csv_path), str(svg_path)]

    if args.target == "fig1":
        window = Interval(-10.0, 10.0)
        plot_window = Interval(-4.0, 4.0)
        panels = [
            ("fig1a", "x + 1", 0),
            ("fig1b", "2*x", 1),
            ("fig1c", "exp(x) - 2", 2),
            ("fig1d", "tanh(2*x)", 3),
        ]
        counts = []
        for name, text, expected in panels:
            f = parse(text)
            points, unresolved = fixed_points_ex(f, window)
            got = len(points)
            counts.append(got)
            good = got == expected and not unresolved
            ok = ok and good
            lines.append(f"{name} {text}: {got} fixed point(s), expected {expected}: "
                         + ("ok" if good else "MISMATCH"))
            emit_files(name, f, plot_window, title=text)
        lines.append(f"fixed-point counts: {','.join(map(str, counts))}")
        results["counts"] = counts

    elif args.target == "fig2":
        g = _fig2_expression()
        window = Interval(-20.0, 20.0)
        points, unresolved = fixed_points_ex(g, window)
        got = len(points)
        ok = got == 5 and not unresolved
        lines.append(f"{got} fixed points found"
                     + (" (expected 5): ok" if ok else f" (expected 5): MISMATCH"))
        results["count"] = got
        results["locations"] = [p.location for p in points]
        results["analysis_window"] = interval_dict(window)
        emit_files("fig2", g, Interval(-8.0, 4.0),
                   title="4*f(f(x+s)-2s)+s+4, s=0.94, f=tanh(4x)+tanh(x/4)")

    elif args.target == "counterexample":
        f = parse("tanh(4*x) + tanh(x/4)")
        s1 = schwarzian(f, 1.0)
        ok = s1 > 1.0
        lines.append(f"S_f(1) = {s1!r} > 1: FAIL membership"
                     + (" (as expected)" if ok else " EXPECTED BUT NOT OBSERVED"))
        results["schwarzian_at_1"] = s1
        emit_files("counterexample", f, Interval(-3.0, 3.0), transform=schwarzian,
                   header=("x", "S_f(x)"), ylabel="S_f(x)", diagonal=False,
                   title="Schwarzian of tanh(4x) + tanh(x/4)")

    elif args.target == "elu":
        left = parse("exp(x) - 1")
        right = parse("x")
        window = Interval(-5.0, 5.0)
        lres = glueable_check(left, window)
        rres = glueable_check(right, window)
        glue_ok = lres.verdict == "Glueable" and lres.left_bound_ok \
            and rres.verdict == "Glueable" and rres.right_bound_ok
        lines.append(f"glueable(exp(x) - 1): {lres.verdict}; glueable(x): {rres.verdict}")
        elu = glue(left, right)
        cert = certify_membership(elu, window)
        lines.append(f"certify(elu) on [-5, 5]: {cert.verdict}")
        ok = glue_ok and cert.verdict == CERTIFIED
        results["glueable"] = {"left": glueable_dict(lres), "right": glueable_dict(rres)}
        results["certificate"] = certificate_dict(cert)
        emit_files("elu", elu, Interval(-4.0, 4.0), title="ELU: glue(exp(x)-1, x)")

    results["ok"] = ok
    report = Report("reproduce", None, None, results,
                    wall_time=time.perf_counter() - t0)
    _emit(report, args, lines + [f"assertions: {'pass' if ok else 'FAIL'}"])
    return EXIT_OK if ok else EXIT_FALSIFIED


_HANDLERS = {
    "parse": _cmd_parse,
    "chi": _cmd_chi,
    "schwarzian": _cmd_schwarzian,
    "fixpoints": _cmd_fixpoints,
    "critpoints": _cmd_critpoints,
    "certify": _cmd_certify,
    "glue": _cmd_glue,
    "singer": _cmd_singer,
    "reproduce": _cmd_reproduce,
}


def _merge_negative_values(argv: list[str]) -> list[str]:
    # argparse mistakes "-5,5" after --domain/--at for an option string;
    # fold such values into --flag=value form.
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--domain", "--at") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_negative_values(list(argv))
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageExit as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (DiagonalInput, ValueCollision, CriticalPoint, SeamPoint,
            DomainViolation, PreconditionUnmet) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except CoexpandError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
