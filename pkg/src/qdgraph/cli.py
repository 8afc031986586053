"""
Command-line front end.

Every command prints a JSON report on standard output (keys sorted, floats
rounded to 12 significant digits) and can also write it to ``--json`` and
an SVG drawing to ``--out``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .algebra import FactoredRational, classify_double_pole, local_data
from .detector import find_short_trajectory
from .errors import DegenerateParams, QDError
from .families import (JACOBI, LAGUERRE, jacobi_polynomial_zeros, jacobi_qd,
                       jacobi_zeros, laguerre_polynomial_zeros, laguerre_qd,
                       laguerre_zeros, sweep, zero_measure_overlay)
from .periods import (OrientedArc, condition_check, contour_integral_sqrt,
                      jacobi_quantization, laguerre_quantization)
from .polygon import PolygonData, teichmuller_residual
from .svg import RenderSpec, render_graph
from .tracer import TraceOptions, critical_graph

EXIT_OK, EXIT_ABSENT, EXIT_INPUT, EXIT_FAILED = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input; mapped to exit status 2."""


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def _canon(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.12g}") + 0.0
    if isinstance(obj, complex):
        return [_canon(obj.real), _canon(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return _canon(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=1) + "\n"


def _emit(args, report: dict, svg: str | None = None):
    text = dumps(report)
    sys.stdout.write(text)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            fh.write(text)
    if svg is not None and getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(svg)


# --------------------------------------------------------------------------
# Input parsing
# --------------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """``"re"`` or ``"re,im"``."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"cannot read {text!r} as a complex number (use re or re,im)")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_rational(path: str) -> FactoredRational:
    obj = _load_json(path)
    try:
        return FactoredRational.from_json(obj)
    except (KeyError, TypeError, ValueError, QDError) as exc:
        raise InputError(f"{path}: not a factored rational function ({exc})") from exc


def load_arc(text: str) -> OrientedArc:
    obj = _load_json(text)
    try:
        return OrientedArc.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{text}: not an arc ({exc})") from exc


def _options(q: FactoredRational, args) -> TraceOptions:
    try:
        return TraceOptions.for_rational(q, hit_radius=args.hit_radius,
                                         escape_radius=args.escape_radius, rel_tol=args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _render_spec(args, points) -> RenderSpec:
    bg = bool(getattr(args, "background", False))
    if getattr(args, "view", None):
        try:
            cx, cy, w, h = (float(x) for x in args.view.split(","))
            return RenderSpec(complex(cx, cy), w, h, args.resolution, bg)
        except ValueError as exc:
            raise InputError(f"--view expects cx,cy,width,height ({exc})") from exc
    return RenderSpec.around(points, resolution=args.resolution, background_field=bg)


def _graph_report(g) -> dict:
    out = g.to_json()
    out["options"] = g.options.to_json()
    out["connections"] = [[_canon(g.points[i].point), _canon(g.points[j].point)]
                          for i, j in sorted(g.adjacency)]
    return out


def _double_poles(q: FactoredRational) -> list:
    out = []
    for r, m in q.factors:
        if m == -2:
            out.append({"point": r, "kind": classify_double_pole(local_data(q, r)).value})
    return out


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_graph(args) -> int:
    q = load_rational(args.spec)
    opts = _options(q, args)
    try:
        g = critical_graph(q, opts)
    except (QDError, ValueError) as exc:
        print(f"qdgraph: trace failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    svg = render_graph(g, _render_spec(args, q.roots)) if args.out else None
    _emit(args, _graph_report(g), svg)
    return EXIT_OK


def _short_exit(report) -> int:
    if not report.resolved:
        return EXIT_FAILED
    return EXIT_OK if report.found else EXIT_ABSENT


def cmd_short(args) -> int:
    q = load_rational(args.spec)
    zeros = q.zeros
    for idx in (args.from_index, args.to_index):
        if not 0 <= idx < len(zeros):
            raise InputError(f"zero index {idx} out of range (q has {len(zeros)} zeros)")
    if args.from_index == args.to_index:
        raise InputError("the two zero indices must differ")
    opts = _options(q, args)
    rep = find_short_trajectory(q, zeros[args.from_index], zeros[args.to_index], opts)
    svg = None
    if args.out:
        svg = render_graph(critical_graph(q, opts), _render_spec(args, q.roots), rep.trajectory)
    _emit(args, rep.to_json(), svg)
    return _short_exit(rep)


def cmd_period(args) -> int:
    f = load_rational(args.spec)
    arc = load_arc(args.arc)
    try:
        if args.contour:
            value = contour_integral_sqrt(f, arc)
            report = {"contour_integral": value}
        else:
            chk = condition_check(f, arc)
            report = {"integral": chk.value, "real_part": chk.real_part, "condition_passes": chk.passes}
    except QDError as exc:
        raise InputError(str(exc)) from exc
    _emit(args, report)
    return EXIT_OK


def _arc_from_report(rep, start: complex, end: complex) -> OrientedArc:
    v = list(rep.trajectory.vertices)
    v[0] = rep.trajectory.start
    v.append(end if abs(v[0] - start) < abs(v[0] - end) else start)
    v = [z for k, z in enumerate(v) if k == 0 or z != v[k - 1]]
    return OrientedArc(v)


def _family_run(args, family: str, q: FactoredRational, a: complex, b: complex, params: dict,
                quantize, overlay) -> int:
    opts = _options(q, args)
    g = critical_graph(q, opts)
    rep = find_short_trajectory(q, a, b, opts)
    report = {"family": family, "parameters": params, "zeros": [a, b],
              "double_poles": _double_poles(q), "short": rep.to_json(),
              "graph": _graph_report(g)}
    if args.quantize and rep.found:
        report["quantization"] = quantize(_arc_from_report(rep, b, a)).to_json()
    if args.overlay_zeros:
        if rep.found:
            report["overlay"] = overlay(rep.trajectory).to_json()
        else:
            report["overlay"] = None
    svg = render_graph(g, _render_spec(args, q.roots), rep.trajectory) if args.out else None
    _emit(args, report, svg)
    return _short_exit(rep)


def _real_params(*vals):
    if any(v.imag != 0 for v in vals):
        raise InputError("--overlay-zeros needs real parameters")
    return [v.real for v in vals]


def cmd_laguerre(args) -> int:
    C = parse_complex(args.C)
    try:
        q = laguerre_qd(C)
    except DegenerateParams as exc:
        raise InputError(str(exc)) from exc
    a, b = laguerre_zeros(C)

    def overlay(traj):
        (c,) = _real_params(C)
        z = laguerre_polynomial_zeros(args.overlay_zeros, c)
        return zero_measure_overlay(z, traj.vertices, args.tube)

    if args.overlay_zeros:
        _real_params(C)
    return _family_run(args, LAGUERRE, q, a, b, {"C": C},
                       lambda arc: laguerre_quantization(C, arc), overlay)


def cmd_jacobi(args) -> int:
    A, B = parse_complex(args.A), parse_complex(args.B)
    try:
        q = jacobi_qd(A, B)
    except DegenerateParams as exc:
        raise InputError(str(exc)) from exc
    a, b = jacobi_zeros(A, B)

    def overlay(traj):
        ra, rb = _real_params(A, B)
        z = jacobi_polynomial_zeros(args.overlay_zeros, ra, rb)
        return zero_measure_overlay(z, traj.vertices, args.tube)

    if args.overlay_zeros:
        _real_params(A, B)
    return _family_run(args, JACOBI, q, a, b, {"A": A, "B": B},
                       lambda arc: jacobi_quantization(A, B, arc), overlay)


def _line(p0, p1, n: int) -> list:
    if n < 1:
        raise InputError("--samples must be positive")
    if n == 1:
        return [p0]
    return [p0 + (p1 - p0) * k / (n - 1) for k in range(n)]


def cmd_sweep(args) -> int:
    if args.family == LAGUERRE:
        if args.start is None or args.end is None:
            raise InputError("laguerre sweeps need --start C0 --end C1")
        path = _line(parse_complex(args.start), parse_complex(args.end), args.samples)
    else:
        try:
            A0, B0 = (parse_complex(x) for x in args.start.split(";"))
            A1, B1 = (parse_complex(x) for x in args.end.split(";"))
        except (AttributeError, ValueError) as exc:
            raise InputError("jacobi sweeps need --start 'A0;B0' --end 'A1;B1'") from exc
        path = list(zip(_line(A0, A1, args.samples), _line(B0, B1, args.samples)))
    opts = None
    if args.hit_radius or args.escape_radius or args.tol:
        opts_q = laguerre_qd(path[0]) if args.family == LAGUERRE else jacobi_qd(*path[0])
        opts = _options(opts_q, args)
    try:
        res = sweep(args.family, path, opts)
    except DegenerateParams as exc:
        raise InputError(str(exc)) from exc
    _emit(args, res.to_json())
    return EXIT_OK if res.dichotomy_ok else EXIT_ABSENT


def cmd_check(args) -> int:
    if args.teichmuller:
        obj = _load_json(args.teichmuller)
        items = obj if isinstance(obj, list) else [obj]
        tol = args.tol if args.tol else 1e-9
        try:
            polys = [PolygonData.from_json(p) for p in items]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.teichmuller}: not polygon data ({exc})") from exc
        res = [teichmuller_residual(p) for p in polys]
        report = {"residuals": res, "valid": [abs(r) <= tol for r in res], "tolerance": tol}
        _emit(args, report)
        return EXIT_OK if all(abs(r) <= tol for r in res) else EXIT_ABSENT
    if args.spec and args.arc:
        f = load_rational(args.spec)
        try:
            chk = condition_check(f, load_arc(args.arc))
        except QDError as exc:
            raise InputError(str(exc)) from exc
        _emit(args, chk.to_json())
        return EXIT_OK if chk.passes else EXIT_ABSENT
    raise InputError("check needs --teichmuller FILE, or --spec and --arc")


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, spec_required: bool = False):
    p.add_argument("--spec", required=spec_required, help="factored rational function (JSON)")
    p.add_argument("--out", help="write an SVG drawing here")
    p.add_argument("--json", help="also write the JSON report here")
    p.add_argument("--tol", type=float, default=None, help="relative step tolerance of the tracer")
    p.add_argument("--hit-radius", type=float, default=None)
    p.add_argument("--escape-radius", type=float, default=None)
    p.add_argument("--view", help="viewport cx,cy,width,height for the SVG")
    p.add_argument("--resolution", type=int, default=600, help="SVG width in pixels")
    p.add_argument("--background", action="store_true", help="draw non-critical trajectories too")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdgraph", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="critical graph of a quadratic differential")
    _common(p, spec_required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("short", help="short trajectory between two zeros")
    _common(p, spec_required=True)
    p.add_argument("--from", dest="from_index", type=int, required=True, help="index into the zeros")
    p.add_argument("--to", dest="to_index", type=int, required=True)
    p.set_defaults(func=cmd_short)

    p = sub.add_parser("period", help="integral of sqrt f along an arc or contour")
    _common(p, spec_required=True)
    p.add_argument("--arc", required=True, help="arc JSON file")
    p.add_argument("--contour", action="store_true", help="treat the arc as a closed contour")
    p.set_defaults(func=cmd_period)

    for name, func in ((LAGUERRE, cmd_laguerre), (JACOBI, cmd_jacobi)):
        p = sub.add_parser(name, help=f"{name} family")
        _common(p)
        if name == LAGUERRE:
            p.add_argument("--C", required=True, help="parameter C as re or re,im")
        else:
            p.add_argument("--A", required=True, help="parameter A as re or re,im")
            p.add_argument("--B", required=True, help="parameter B as re or re,im")
        p.add_argument("--quantize", action="store_true", help="quantized period of the found arc")
        p.add_argument("--overlay-zeros", type=int, default=0, metavar="N",
                       help="fraction of polynomial zeros near the short trajectory")
        p.add_argument("--tube", type=float, default=0.1)
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="detector along a straight parameter path")
    _common(p)
    p.add_argument("--family", choices=[LAGUERRE, JACOBI], required=True)
    p.add_argument("--start", help="C0, or 'A0;B0' for jacobi")
    p.add_argument("--end", help="C1, or 'A1;B1' for jacobi")
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="polygon identity or the real-period condition")
    _common(p)
    p.add_argument("--teichmuller", help="polygon JSON (object or list)")
    p.add_argument("--arc", help="arc JSON for the condition check")
    p.set_defaults(func=cmd_check)
    return parser


_VALUE_FLAGS = ("--C", "--A", "--B", "--start", "--end")


def _glue_values(argv):
    # "-0.95,0.1" does not look like a number to argparse; attach such
    # values to their flag so they are not taken for options
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
            continue
        out.append(tok)
        k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"qdgraph: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QDError as exc:
        print(f"qdgraph: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
