"""Command-line front end: ``mlf <command> [flags]``.

Every command prints one record with the keys schema_version, command, params,
summary and rows, as JSON (default) or CSV.  Numbers are written with 17
significant digits so they parse back to the same doubles.  Exit codes: 0 ok,
2 invalid flags or parameters, 3 evaluation failure, 4 contour through a zero.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import cm, core, figures, hfun, inequal, zeros
from .errors import ContourThroughZero, MLFError

SCHEMA_VERSION = "1"
PERTURB_RETRIES = 3

EPILOG = """\
Branches: powers z**(1/alpha) use the principal branch, arg z in (-pi, pi].
Numbers are printed with 17 significant digits; failed values are null with an
explicit error field, never NaN.
Exit codes: 0 ok, 2 invalid flags or parameters, 3 evaluation failure,
4 zero-counting contour passes through a zero after 3 perturbed retries.
MLF_THREADS caps the number of worker threads used for large grids.
"""


class UsageError(Exception):
    pass


# -- serialisation ----------------------------------------------------------

def _num(x):
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else None


def to_json(obj):
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = _num(obj)
        return "null" if s is None else s
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        s = _num(v)
        return "" if s is None else s
    return str(v)


def to_csv(record):
    rows = record["rows"]
    columns = ["schema_version", "command"]
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(columns)
    for row in rows:
        full = dict(row, schema_version=record["schema_version"], command=record["command"])
        w.writerow([_cell(full.get(c)) for c in columns])
    return buf.getvalue()


def make_record(command, params, rows, summary=None):
    return {"schema_version": SCHEMA_VERSION, "command": command, "params": params,
            "summary": summary or {}, "rows": rows}


def emit(record, fmt, stream):
    if fmt == "csv":
        stream.write(to_csv(record))
    else:
        stream.write(to_json(record) + "\n")


# -- commands ---------------------------------------------------------------

def _params(args):
    try:
        return core.Params(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args):
    p = _params(args)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    z = complex(args.re, args.im)
    r = core.eval(p, z, args.tol, use_closed_form=not args.no_closed_form)
    row = {"re": r.value.real, "im": r.value.imag, "abs_err_est": r.abs_err_est, "method": r.method.value}
    params = {"alpha": p.alpha, "beta": p.beta, "re": z.real, "im": z.imag, "tol": args.tol}
    return make_record("eval", params, [row])


def cmd_h(args):
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    rows = []
    for x in args.x:
        if not (x >= 0 and math.isfinite(x)):
            raise UsageError(f"--x values must be non-negative, got {x}")
        s = hfun.solve_h(x, args.tol)
        rows.append({"x": s.x, "h": s.h, "residual": s.residual, "h_prime": hfun.h_prime(x)})
    return make_record("h", {"x": list(args.x), "tol": args.tol}, rows)


def _perturbed(rect, k):
    # widen each edge by a small, edge-specific fraction of the box size
    w = rect.re_max - rect.re_min
    h = rect.im_max - rect.im_min
    d = 1e-3 * k
    return zeros.Rect(rect.re_min - 0.7 * d * w, rect.re_max + 1.3 * d * w,
                      rect.im_min - 1.1 * d * h, rect.im_max + 1.1 * d * h)


def cmd_zeros(args):
    p = _params(args)
    if args.xmin is not None and not args.xmin < args.xmax <= 0:
        raise UsageError("need --xmin < --xmax <= 0")
    if args.step is not None and not args.step > 0:
        raise UsageError("--step must be positive")
    if args.n_boundary < 64:
        raise UsageError("--n-boundary must be at least 64")
    if args.xmin is None and args.rect is None:
        raise UsageError("give --xmin or --rect")
    rect = None
    if args.rect is not None:
        try:
            rect = zeros.Rect(*args.rect)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    rows = []
    params = {"alpha": p.alpha, "beta": p.beta}
    summary = {}
    if args.xmin is not None:
        params.update(xmin=args.xmin, xmax=args.xmax, step=args.step)
        for zr in zeros.real_zero_scan(p, args.xmin, args.xmax, args.step):
            rows.append({"kind": "real", "re": zr.location, "im": 0.0, "width": zr.width,
                         "multiplicity": zr.multiplicity})
    if rect is not None:
        params["rect"] = [rect.re_min, rect.re_max, rect.im_min, rect.im_max]
        used = rect
        for attempt in range(PERTURB_RETRIES + 1):
            used = rect if attempt == 0 else _perturbed(rect, attempt)
            try:
                count = zeros.count_zeros_rect(p, used, args.n_boundary)
                break
            except ContourThroughZero:
                if attempt == PERTURB_RETRIES:
                    raise
        summary["rect_used"] = [used.re_min, used.re_max, used.im_min, used.im_max]
        summary["rect_count"] = count
        if used.is_symmetric():
            rep = zeros.classify_zero_reality(p, used, args.n_boundary)
            summary["real_count"] = rep.real_count
            summary["nonreal_count"] = rep.nonreal_count
        if args.locate:
            for z in zeros.find_complex_zeros(p, used):
                if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
                    rows.append({"kind": "complex", "re": z.real, "im": z.imag, "width": None,
                                 "multiplicity": 1})
    return make_record("zeros", params, rows, summary)


def cmd_check(args):
    p = _params(args)
    n_re, n_im = (args.grid[0], args.grid[-1])
    try:
        g = inequal.GridSpec(tuple(args.re_range), tuple(args.im_range), n_re, n_im)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.ineq == "LE":
        recs = inequal.check_LE(p, g, args.tol)
    elif args.ineq == "GE":
        recs = inequal.check_GE(p, g, args.tol)
    else:
        if not inequal.two_sided_admissible(p):
            raise UsageError(f"two-sided bound is not available at alpha={p.alpha}, beta={p.beta}")
        recs = inequal.check_two_sided(p, g, args.tol)
    rows = [{"re": r.z.real, "im": r.z.imag, "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin,
             "budget": r.budget, "kind": r.kind} for r in recs]
    params = {"alpha": p.alpha, "beta": p.beta, "ineq": args.ineq, "re_range": list(g.re_range),
              "im_range": list(g.im_range), "grid": [n_re, n_im], "tol": args.tol}
    return make_record("check", params, rows, {"violations": len(rows), "points": n_re * n_im})


def cmd_cm(args):
    p = _params(args)
    if not 0 <= args.order <= cm.MAX_ORDER:
        raise UsageError(f"--order must be in [0, {cm.MAX_ORDER}]")
    if any(not x > 0 for x in args.points):
        raise UsageError("--points must be positive")
    target = cm.as_target(args.target)
    rows = []
    for x in args.points:
        s = cm.cm_signs(p, target, x, args.order)
        for n, (v, e, sc) in enumerate(zip(s.values, s.errs, s.scales)):
            rows.append({"x": x, "n": n, "value": v, "abs_err_est": e, "scale": sc,
                         "sign_ok": bool(v >= -cm.EPS_REL * sc)})
    verdict = cm.is_cm_sampled(p, target, args.points, args.order)
    summary = {"passed": verdict.passed, "doubtful": verdict.doubtful,
               "first_failure": None if verdict.first_failure is None else
               {"x": verdict.first_failure[0], "n": verdict.first_failure[1], "value": verdict.first_failure[2]}}
    params = {"alpha": p.alpha, "beta": p.beta, "target": target.value, "order": args.order,
              "points": list(args.points)}
    return make_record("cm", params, rows, summary)


def cmd_figure(args):
    if args.resolution < 50:
        raise UsageError("--resolution must be at least 50")
    svg_path, csv_path, rmap = figures.write_figure(args.which, args.resolution, args.out)
    counts = {}
    for _, _, lab in rmap.rows:
        key = lab.additivity.value if args.which == 1 else lab.ineq.value
        counts[key] = counts.get(key, 0) + 1
    rows = [{"file": svg_path, "format": "svg"}, {"file": csv_path, "format": "csv"}]
    params = {"which": args.which, "resolution": args.resolution, "out": args.out}
    return make_record("figure", params, rows, {"label_counts": dict(sorted(counts.items()))})


# -- parser -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    ab = argparse.ArgumentParser(add_help=False)
    ab.add_argument("--alpha", type=float, required=True)
    ab.add_argument("--beta", type=float, required=True)

    parser = argparse.ArgumentParser(prog="mlf", description="Mittag-Leffler function tools.",
                                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    kw = dict(epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)

    s = sub.add_parser("eval", parents=[common, ab], help="evaluate E_{alpha,beta}(z)", **kw)
    s.add_argument("--re", type=float, required=True)
    s.add_argument("--im", type=float, default=0.0)
    s.add_argument("--tol", type=float, default=core.DEFAULT_TOL)
    s.add_argument("--no-closed-form", action="store_true", help="skip the closed-form shortcut")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("h", parents=[common], help="solve 2 G(x+y)^2 = G(y) G(2x+y) for y = h(x)", **kw)
    s.add_argument("--x", type=float, nargs="+", required=True)
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_h)

    s = sub.add_parser("zeros", parents=[common, ab], help="real zeros and rectangle zero counts", **kw)
    s.add_argument("--xmin", type=float)
    s.add_argument("--xmax", type=float, default=0.0)
    s.add_argument("--step", type=float)
    s.add_argument("--rect", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    s.add_argument("--n-boundary", type=int, default=256)
    s.add_argument("--locate", action="store_true", help="also locate non-real zeros inside --rect")
    s.set_defaults(func=cmd_zeros)

    s = sub.add_parser("check", parents=[common, ab], help="grid check of a modulus inequality", **kw)
    s.add_argument("--ineq", choices=("LE", "GE", "two-sided"), required=True)
    s.add_argument("--re-range", type=float, nargs=2, default=(-20.0, 20.0))
    s.add_argument("--im-range", type=float, nargs=2, default=(-20.0, 20.0))
    s.add_argument("--grid", type=int, nargs="+", default=[200], metavar="N",
                   help="points per axis, one value or N_RE N_IM")
    s.add_argument("--tol", type=float, default=core.DEFAULT_TOL)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("cm", parents=[common, ab], help="sampled complete-monotonicity test", **kw)
    s.add_argument("--target", choices=("reciprocal", "minus", "reciprocal_E", "E_of_minus_x"),
                   default="reciprocal")
    s.add_argument("--order", type=int, default=12)
    s.add_argument("--points", type=float, nargs="+", default=list(cm.DEFAULT_POINTS))
    s.set_defaults(func=cmd_cm)

    s = sub.add_parser("figure", parents=[common], help="write a region map as SVG and CSV", **kw)
    s.add_argument("--which", type=int, choices=(1, 2), required=True)
    s.add_argument("--resolution", type=int, default=200)
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_figure)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "grid", None) is not None and len(args.grid) > 2:
        parser.error("--grid takes one or two values")
    try:
        record = args.func(args)
    except UsageError as exc:
        stderr.write(f"mlf: error: {exc}\n")
        return 2
    except ContourThroughZero as exc:
        stderr.write(f"mlf: contour through a zero: {exc}\n")
        emit(make_record(args.command, {}, [], {"error": str(exc), "ok": False}), args.format, stdout)
        return 4
    except (MLFError, ValueError, OverflowError) as exc:
        stderr.write(f"mlf: evaluation failed: {exc}\n")
        emit(make_record(args.command, {}, [], {"error": str(exc), "ok": False}), args.format, stdout)
        return 3
    emit(record, args.format, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
