"""Command-line front end.

Every subcommand prints one report, as JSON ``{command, params, rows,
summary}`` (default) or as CSV rows.  Floats are written with 17
significant digits so identical inputs give byte-identical output.

Exit status: 0 when every verdict holds or is informational, 1 when a
verdict fails, 2 on usage or parameter-domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import constants as K
from . import functionals as fn
from . import verify as V
from .quadrature import default_tol
from .radial import (
    DEFAULT_GRID_SIZE,
    DEFAULT_GRID_TMIN,
    comparison_check,
    ma_distribution,
    parse_profile,
    solve_radial_ma,
)
from .reports import InequalityReport, ScanResult, Verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---- output ------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _plain(v: Any) -> Any:
    if isinstance(v, Verdict):
        return v.value
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def _json(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        s = _fmt_float(v)
        return json.dumps(s) if s in ("nan", "inf", "-inf") else s
    if isinstance(v, (int, str)):
        return json.dumps(v)
    if isinstance(v, list):
        return "[" + ", ".join(_json(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json(x)}" for k, x in v.items()) + "}"
    return json.dumps(str(v))


def render(command: str, params: dict, rows: list[dict], summary: dict, fmt: str) -> str:
    params, rows, summary = _plain(params), _plain(rows), _plain(summary)
    if fmt == "json":
        body = ",\n".join("    " + _json(r) for r in rows)
        return ("{\n"
                f'  "command": {_json(command)},\n'
                f'  "params": {_json(params)},\n'
                f'  "rows": [\n{body}\n  ],\n'
                f'  "summary": {_json(summary)}\n'
                "}\n")
    keys: list[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for r in rows:
        writer.writerow([_fmt_float(r[k]) if isinstance(r.get(k), float) else
                         ("" if r.get(k) is None else r.get(k)) for k in keys])
    return buf.getvalue()


def _report_row(rep: InequalityReport, extra: dict) -> dict:
    return {**extra, **rep.as_row()}


def _summarize(reports: Sequence[InequalityReport]) -> dict:
    counts = {v.value: 0 for v in Verdict}
    for r in reports:
        counts[r.verdict.value] += 1
    finite = [r.slack for r in reports if math.isfinite(r.slack)]
    return {"points": len(reports), "verdicts": counts,
            "min_slack": min(finite) if finite else None,
            "all_hold": counts["fails"] == 0}


# ---- argument helpers ----------------------------------------------------------------

def _parse_j_range(text: str) -> list[float]:
    """``1:50`` (integers), ``1:1e6:geom:13`` (log-spaced), or ``1,5,10``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        lo, hi = float(parts[0]), float(parts[1])
        if len(parts) == 2:
            return [float(j) for j in range(int(lo), int(hi) + 1)]
        if len(parts) == 4 and parts[2] == "geom":
            return [float(x) for x in np.geomspace(lo, hi, int(parts[3]))]
        raise UsageError(f"bad range {text!r}; use a:b, a:b:geom:m or a comma list")
    return [float(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _positive(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text!r}")
        return v
    return conv


def _dimension(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"n must be an integer, got {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError(f"n must be >= 2, got {text!r}")
    return v


def _eps(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"eps must lie in (0, 1), got {text!r}")
    return v


def _nonneg(name):
    def conv(text):
        v = float(text)
        if not v >= 0:
            raise argparse.ArgumentTypeError(f"{name} must be nonnegative, got {text!r}")
        return v
    return conv


def _profiles(specs, n, p):
    if not specs:
        return []
    specs = [specs] if isinstance(specs, str) else list(specs)
    out = []
    for s in specs:
        try:
            out.append((s, parse_profile(s, n=n, p=p)))
        except ValueError as exc:
            raise UsageError(f"--family: {exc}") from None
    return out


def _beta_n_note(args) -> dict:
    return {} if args.beta_n_given else {"note": K.BETA_N_NOTE}


# ---- subcommands ---------------------------------------------------------------------

def cmd_energy(args):
    profiles = _profiles(args.family, args.n, args.p)
    if not profiles:
        raise UsageError("energy needs --family")
    rows = []
    for spec, u in profiles:
        rep = fn.energy_p(u, args.p, args.n, tol=args.tol)
        closed = fn.energy_p_closed_form(u, args.p, args.n)
        row = {"family": spec, "p": args.p, "n": args.n, "energy": rep.value,
               "method": rep.method, "abs_error_estimate": rep.abs_error_estimate,
               "divergent": rep.divergent, "closed_form": closed,
               "closed_form_delta": (abs(rep.value - closed) / closed
                                     if closed and math.isfinite(rep.value) else None),
               "smooth_formula_delta": rep.cross_check_delta,
               "sup_norm": fn.sup_norm(u)}
        if args.q is not None:
            norm = fn.lq_norm(u, args.q, args.n, tol=args.tol)
            row.update({"q": args.q, "lq_norm": norm.value})
        ei = fn.exp_integral(u, args.n, tol=args.tol)
        row.update({"exp_integral": ei.value, "log_exp_integral": ei.log_value})
        if args.chi:
            chi = _chi(args.chi)
            row.update({"chi": args.chi, "energy_chi": fn.energy_chi(u, chi, args.n).value})
        rows.append(row)
    return rows, {"rows": len(rows)}, []


def _chi(spec):
    try:
        return V.named_chi(spec)
    except ValueError as exc:
        raise UsageError(f"--chi: {exc}") from None


def cmd_constants(args):
    cs = K.constant_set(args.p, args.q, args.n, args.eps, args.beta_n, args.diam)
    row = cs.as_dict()
    if args.q <= args.n + args.p:
        row["ball_upper_C"] = K.ball_upper_C(args.p, args.q, args.n)
    if args.q >= 1:
        lb = K.ball_lower_C_report(args.p, args.q, args.n)
        row.update({"ball_lower_C": lb.exact, "ball_lower_beta": lb.beta_exact,
                    "ball_lower_C_approx": lb.approx, "ball_lower_C_printed": lb.approx_printed})
    return [row], _beta_n_note(args), []


def _campaign(args, fn_check, points, extra_rows, kwargs):
    reports = V.run_points(fn_check, points, jobs=args.jobs, kwargs=kwargs)
    rows = [_report_row(r, e) for r, e in zip(reports, extra_rows)]
    return rows, reports


def cmd_mt(args):
    if args.suite:
        points = V.mt_stress_suite(args.p, args.n)
        labels = [{"family": repr(pt[0])} for pt in points]
    else:
        profiles = _profiles(args.family, args.n, args.p)
        if not profiles:
            raise UsageError("mt-check needs --family or --suite")
        points = [(u, args.p, args.n) for _, u in profiles]
        labels = [{"family": s} for s, _ in profiles]
    kwargs = {"eps": args.eps, "beta_n": args.beta_n}
    rows, reports = _campaign(args, V.check_mt, points, labels, kwargs)
    rsep = V.run_points(V.check_rsep, [pt for pt in points], jobs=args.jobs)
    summary = _summarize(reports)
    finite_A = [r.details["empirical_A"] for r in reports if "empirical_A" in r.details]
    summary["max_empirical_A"] = max(finite_A) if finite_A else None
    d_needed = [r.details["d_needed"] for r in rsep if "d_needed" in r.details]
    summary["rsep_d_estimate"] = max(d_needed) if d_needed else None
    summary.update(_beta_n_note(args))
    return rows, summary, reports


def cmd_sobolev(args):
    if args.suite:
        points = V.sobolev_stress_suite()
        labels = [{"family": repr(pt[0])} for pt in points]
    else:
        profiles = _profiles(args.family, args.n, args.p)
        if not profiles:
            raise UsageError("sobolev-check needs --family or --suite")
        points = [(u, args.p, args.q, args.n) for _, u in profiles]
        labels = [{"family": s} for s, _ in profiles]
    kwargs = {"eps": args.eps, "beta_n": args.beta_n, "form": args.form}
    rows, reports = _campaign(args, V.check_sobolev, points, labels, kwargs)
    summary = _summarize(reports)
    summary.update(_beta_n_note(args))
    return rows, summary, reports


def cmd_est(args):
    if args.suite:
        points = V.est_stress_suite()
        labels = [{"u": repr(pt[0]), "v": repr(pt[1])} for pt in points]
    else:
        if not (args.u and args.v):
            raise UsageError("est-check needs --u and --v, or --suite")
        (su, u), = _profiles([args.u], args.n, args.p)
        (sv, v), = _profiles([args.v], args.n, args.p)
        points = [(u, v, args.p, args.k, args.n)]
        labels = [{"u": su, "v": sv}]
    rows, reports = _campaign(args, V.check_est, points, labels, {})
    return rows, _summarize(reports), reports


def cmd_holder(args):
    if args.suite:
        points = V.holder_stress_suite()
        labels = [{"u0": repr(pt[0]), "u_list": repr(list(pt[1]))} for pt in points]
    else:
        if not (args.u0 and args.u):
            raise UsageError("holder-check needs --u0 and --u (n times), or --suite")
        (s0, u0), = _profiles([args.u0], args.n, args.p)
        us = _profiles(args.u, args.n, args.p)
        if len(us) != args.n:
            raise UsageError(f"--u must be given n={args.n} times, got {len(us)}")
        points = [(u0, tuple(u for _, u in us), args.p, args.n)]
        labels = [{"u0": s0, "u_list": ";".join(s for s, _ in us)}]
    rows, reports = _campaign(args, V.check_holder, points, labels, {})
    return rows, _summarize(reports), reports


def cmd_chi(args):
    profiles = _profiles(args.family, args.n, args.p)
    if not profiles or not args.chi:
        raise UsageError("chi-check needs --family and --chi")
    chi = _chi(args.chi)
    reports, rows = [], []
    for spec, u in profiles:
        rep = V.check_chi(u, chi, args.n, args.eps, args.beta_n, form=args.form, q=args.q)
        reports.append(rep)
        rows.append(_report_row(rep, {"family": spec, "chi": args.chi}))
    summary = _summarize(reports)
    summary.update(_beta_n_note(args))
    return rows, summary, reports


def cmd_scan(args):
    js = _parse_j_range(args.j)
    if not js or any(j <= 0 for j in js):
        raise UsageError("--j must list positive family indices")
    res = V.scan_counterexamples(args.which, args.p, args.q, args.n, js)
    rows = []
    for r in res.rows():
        head = {k: r.pop(k) for k in ("which", "p", "q", "n")}
        head["j"] = r.pop("parameter")
        rows.append({**head, **r})
    return rows, _scan_summary(res), []


def _scan_summary(res: ScanResult) -> dict:
    return {"trend": res.trend.value, "limit": res.limit,
            "max_ratio": max(res.ratios) if res.ratios else None}


def cmd_ratio_limit(args):
    betas = _floats(args.beta)
    if any(b >= 0 for b in betas):
        raise UsageError("--beta values must be negative")
    res = V.ratio_limit(args.p, args.n, betas)
    rows = []
    for r in res.rows():
        r.pop("b_lower", None)
        head = {k: r.pop(k) for k in ("p", "n")}
        head["beta"] = r.pop("parameter")
        rows.append({**head, **r})
    summary = _scan_summary(res)
    summary["b_lower"] = K.b_lower(args.p, args.n)
    summary["final_rel_error"] = res.columns["rel_error"][-1] if res.ratios else None
    summary["monotone"] = bool(np.all(np.diff(res.ratios) < 0) or np.all(np.diff(res.ratios) > 0))
    return rows, summary, []


def cmd_solve_ma(args):
    (spec, u), = _profiles([args.family], args.n, args.p) if args.family else [(None, None)]
    if u is None:
        raise UsageError("solve-ma needs --family")
    dist = ma_distribution(u, args.n)
    target = dist.F.weighted(lambda s: np.maximum(-u.eval(np.minimum(s, 1.0)), 0.0) ** args.p)
    w_round = solve_radial_ma(dist, args.n, grid_size=args.grid_size, t_min=args.t_min)
    w = solve_radial_ma(target, args.n, grid_size=args.grid_size, t_min=args.t_min)
    t_vals = _floats(args.t)
    reports = comparison_check(u, args.p, args.n, t_vals, w=w)
    rows = []
    stride = max(1, w.knots.size // args.emit_points) if args.emit_points else w.knots.size + 1
    for i in range(0, w.knots.size, stride):
        t = float(w.knots[i])
        rows.append({"kind": "grid", "family": spec, "p": args.p, "n": args.n, "t": t,
                     "u": float(u.eval(t)), "w": float(w.values[i])})
    for t, rep in zip(t_vals, reports):
        rows.append(_report_row(rep, {"kind": "comparison", "family": spec}))
    err = float(np.max(np.abs(w_round.values - u.eval(w_round.knots))))
    summary = _summarize(reports)
    summary.update({"roundtrip_sup_error": err, "grid_size": int(w.knots.size),
                    "w_at_zero": w.value_at_zero})
    return rows, summary, reports


def cmd_optimal(args):
    rows = []
    worst = 0.0
    for n in args.n_list:
        up, lo, cl = K.ball_upper_C(1, 1, n), K.ball_lower_C(1, 1, n), K.optimal_C11(n)
        diff = max(abs(up - lo), abs(up - cl), abs(lo - cl)) / cl
        worst = max(worst, diff)
        rows.append({"n": n, "upper": up, "lower": lo, "closed_form": cl, "max_rel_diff": diff})
    return rows, {"max_rel_diff": worst, "agree_1e-12": worst <= 1e-12}, []


# ---- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key=value lines (same names as the flags)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for campaigns")
    common.add_argument("--tol", type=_positive("tol"), default=None,
                        help="quadrature tolerance (default: PLURI_TOL or 1e-10)")

    def params(p, q=False, eps=False, family=True):
        p.add_argument("--p", type=_positive("p"), default=1.0)
        p.add_argument("--n", type=_dimension, default=2)
        if q:
            p.add_argument("--q", type=_positive("q"), default=None if q == "optional" else 2.0)
        if eps:
            p.add_argument("--eps", type=_eps, default=0.5)
            p.add_argument("--beta-n", dest="beta_n", type=_nonneg("beta_n"), default=None)
        if family:
            p.add_argument("--family", action="append",
                           help="profile literal, e.g. power:alpha=1,k=3 (repeatable)")

    parser = argparse.ArgumentParser(prog="pluri", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", parents=[common], help="energies and norms of one profile")
    params(p, q="optional")
    p.add_argument("--chi", help="also evaluate the chi-energy (power:p=.., linear, log1p)")
    p.set_defaults(run=cmd_energy)

    p = sub.add_parser("constants", parents=[common], help="all constants at one parameter point")
    params(p, q=True, eps=True, family=False)
    p.add_argument("--diam", type=_positive("diam"), default=2.0)
    p.set_defaults(run=cmd_constants)

    p = sub.add_parser("mt-check", parents=[common], help="Moser-Trudinger inequality")
    params(p, eps=True)
    p.add_argument("--suite", action="store_true", help="run the built-in stress suite")
    p.set_defaults(run=cmd_mt)

    p = sub.add_parser("sobolev-check", parents=[common], help="Sobolev inequality")
    params(p, q=True, eps=True)
    p.add_argument("--form", choices=("C", "D"), default="C")
    p.add_argument("--suite", action="store_true")
    p.set_defaults(run=cmd_sobolev)

    p = sub.add_parser("est-check", parents=[common], help="mixed-energy estimate with a bounded u")
    params(p, family=False)
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--suite", action="store_true")
    p.set_defaults(run=cmd_est)

    p = sub.add_parser("holder-check", parents=[common], help="Hoelder inequality for mixed energies")
    params(p, family=False)
    p.add_argument("--u0")
    p.add_argument("--u", action="append")
    p.add_argument("--suite", action="store_true")
    p.set_defaults(run=cmd_holder)

    p = sub.add_parser("chi-check", parents=[common], help="chi-energy corollaries")
    params(p, q="optional", eps=True)
    p.add_argument("--chi", required=False)
    p.add_argument("--form", choices=("mt", "sobolev"), default="mt")
    p.set_defaults(run=cmd_chi)

    p = sub.add_parser("scan", parents=[common], help="counterexample family scans")
    params(p, q=True, family=False)
    p.add_argument("--which", choices=("ex1", "ex2", "ex3"), required=True)
    p.add_argument("--j", default="1:50", help="a:b, a:b:geom:m, or comma list")
    p.set_defaults(run=cmd_scan)

    p = sub.add_parser("ratio-limit", parents=[common], help="extremal ratio as beta -> -inf")
    params(p, family=False)
    p.add_argument("--beta", default="-10,-100,-1000,-10000")
    p.set_defaults(run=cmd_ratio_limit)

    p = sub.add_parser("solve-ma", parents=[common], help="radial Monge-Ampere solve and comparison bound")
    params(p, family=False)
    p.add_argument("--family", required=False)
    p.add_argument("--t", default="0.1,1,10")
    p.add_argument("--grid-size", dest="grid_size", type=int, default=DEFAULT_GRID_SIZE)
    p.add_argument("--t-min", dest="t_min", type=_positive("t_min"), default=DEFAULT_GRID_TMIN)
    p.add_argument("--emit-points", dest="emit_points", type=int, default=64,
                   help="grid rows to emit (0 = all)")
    p.set_defaults(run=cmd_solve_ma)

    p = sub.add_parser("optimal", parents=[common], help="squeeze table for C(1,1,n)")
    p.add_argument("--n", dest="n_list", type=_dimension, action="append")
    p.set_defaults(run=cmd_optimal)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from None
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config: expected key=value, got {line!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def _apply_config(parser, argv, args):
    """Re-parse with config values as defaults; explicit flags still win."""
    config = _read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
    known = {a.dest: a for a in sub._actions}  # noqa: SLF001
    defaults = {}
    for key, val in config.items():
        if key not in known:
            raise UsageError(f"--config: unknown key {key!r} for {args.command}")
        action = known[key]
        if isinstance(action, argparse._AppendAction):  # noqa: SLF001
            defaults[key] = [v.strip() for v in val.split(";")]
        elif isinstance(action, argparse._StoreTrueAction):  # noqa: SLF001
            defaults[key] = val.lower() in ("1", "true", "yes")
        else:
            defaults[key] = val
    sub.set_defaults(**defaults)
    new = parser.parse_args(argv)
    for key in defaults:
        action = known[key]
        value = getattr(new, key)
        if isinstance(value, str) and action.type is not None:
            try:
                setattr(new, key, action.type(value))
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"--config {key}: {exc}") from None
    return new


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.config:
            try:
                args = _apply_config(parser, argv, args)
            except SystemExit as exc:
                # argparse already printed the message for a bad config value
                return EXIT_USAGE if exc.code else EXIT_OK
        if hasattr(args, "beta_n"):
            args.beta_n_given = args.beta_n is not None
            if args.beta_n is None:
                args.beta_n = 0.0
        if args.command == "optimal" and not args.n_list:
            args.n_list = [2, 3, 4, 5, 6]
        if getattr(args, "tol", None) is None:
            args.tol = default_tol()
        rows, summary, reports = args.run(args)
    except UsageError as exc:
        print(f"pluri {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"pluri {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("run", "command", "output", "format", "config", "jobs", "beta_n_given")}
    text = render(args.command, params, rows, summary, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    failed = any(r.verdict is Verdict.FAILS for r in reports)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
