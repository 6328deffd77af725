"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad arguments,
3 a numeric routine did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import mpmath

from . import __version__, kernels
from .numeric import (
    ConvergenceError,
    PrecisionContext,
    cross_moment,
    mc_norm_moment,
    quad_I,
    quad_moment_indep2,
    quad_moment_pair,
    sup_cdf_distance,
)
from .series import (
    PRINTED_TABLE_DEPTH,
    TABLE_ERRATA,
    eval_coefficient,
    eval_truncated,
    i_series,
    ip_alt_form,
    ip_poly_form,
    moment_coeff_int_form,
    moment_series,
    rdim_leading,
    rdim_prefactor,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 20180310


@dataclass
class RunReport:
    command: str
    params: dict
    results: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    columns: list = field(default_factory=list)
    lines: list = field(default_factory=list)  # table rendering
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)


def _dec(x, digits: int) -> str:
    if isinstance(x, Fraction):
        x = mpmath.mpf(x.numerator) / x.denominator
    return mpmath.nstr(x, digits)


def _short(x) -> str:
    return _dec(x, 6)


# --------------------------------------------------------------------------
# commands


def cmd_coeffs(args, ctx: PrecisionContext) -> RunReport:
    if not 2 <= args.max_order <= 16:
        raise _ArgError("--max-order must lie in 2..16")
    rep = RunReport("coeffs", {"max_order": args.max_order, "basis": args.basis})
    rep.columns = ["p", "exact_form", "decimal"]
    series = i_series(args.max_order)
    for p in range(args.max_order + 1):
        forms = []
        if p < 2:
            forms.append(("poly", series[p].to_text(), series[p]))
        else:
            if args.basis in ("poly", "both"):
                forms.append(("poly", ip_poly_form(p).to_text(), ip_poly_form(p)))
            if args.basis in ("alt", "both"):
                forms.append(("alt", ip_alt_form(p).to_text(), ip_alt_form(p)))
        for basis, text, obj in forms:
            value = eval_coefficient(obj, ctx)
            row = {"p": p, "basis": basis, "exact_form": text, "decimal": _dec(value, ctx.digits)}
            notes = []
            if p > PRINTED_TABLE_DEPTH:
                row["beyond_printed_table"] = True
                notes.append("beyond printed table")
            printed = [(m, c) for (q, m), c in TABLE_ERRATA.items() if q == p]
            if printed and basis == "poly":
                row["printed_table_differs"] = [
                    {"monomial": list(m), "printed": str(pc), "computed": str(fc)} for m, (pc, fc) in printed
                ]
                notes.append("printed table: " + ", ".join(f"{pc} for {fc}" for _, (pc, fc) in printed))
            rep.results.append(row)
            tag = f"I{p}"
            # with --basis both the alternating form continues the poly line
            lead = f"{tag} = " if basis == "poly" or args.basis == "alt" else " " * len(tag) + " = "
            line = f"{lead}{text} ≈ {_short(value)}"
            if notes:
                line += "  [" + "; ".join(notes) + "]"
            rep.lines.append(line)
    return rep


def cmd_eval(args, ctx: PrecisionContext) -> RunReport:
    if any(n < 2 for n in args.n):
        raise _ArgError("every n must be >= 2")
    if not 0 <= args.order <= 16:
        raise _ArgError("--order must lie in 0..16")
    rep = RunReport("eval", {"n": args.n, "order": args.order, "quadrature": not args.no_quad})
    rep.columns = ["n", "series", "quadrature", "abs_error", "order_estimate"]
    series = i_series(args.order)
    prev = None
    for n in args.n:
        val = eval_truncated(series, n, args.order, ctx)
        row = {"n": n, "series": _dec(val, ctx.digits)}
        line = f"n={n:<6} series={_short(val)}"
        if not args.no_quad:
            q = quad_I(n, ctx)
            err = abs(q - val)
            row.update(quadrature=_dec(q, ctx.digits), abs_error=_dec(err, 6))
            line += f"  quad={_short(q)}  |err|={_short(err)}"
            if prev is not None and err > 0 and prev[1] > 0 and n != prev[0]:
                est = float(mpmath.log(prev[1] / err) / mpmath.log(mpmath.mpf(n) / prev[0]))
                row["order_estimate"] = f"{est:.4f}"
                line += f"  order≈{est:.3f}"
            prev = (n, err)
        rep.results.append(row)
        rep.lines.append(line)
    return rep


def _parse_s(text: str):
    try:
        s = Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            s = float(text)
        except ValueError:
            raise _ArgError(f"cannot parse s={text!r}") from None
        if not math.isfinite(s):
            raise _ArgError("s must be finite")
    if s <= 0:
        raise _ArgError("s must be positive")
    return s


def cmd_moments(args, ctx: PrecisionContext) -> RunReport:
    s = _parse_s(args.s)
    if not 2 <= args.max_order <= 12:
        raise _ArgError("--max-order must lie in 2..12")
    integer = isinstance(s, Fraction) and s.denominator == 1
    real = args.real or not integer
    rep = RunReport(
        "moments", {"s": args.s, "max_order": args.max_order, "real": real, "n": args.n, "compare": args.compare}
    )
    rep.columns = ["p", "exact_form", "decimal"]
    series = moment_series(s, args.max_order, real=real, ctx=ctx)
    for p in range(args.max_order + 1):
        c = series[p]
        if p >= 2 and not real:
            text = moment_coeff_int_form(int(s), p).to_text()
        elif isinstance(c, Fraction):
            text = str(c)
        else:
            text = ""
        value = eval_coefficient(c, ctx)
        rep.results.append({"p": p, "exact_form": text, "decimal": _dec(value, ctx.digits)})
        rep.lines.append(f"m{p} = {text + ' ≈ ' if text else ''}{_short(value)}")
    if args.compare:
        for n in args.n:
            if n < 2:
                raise _ArgError("every n must be >= 2")
            tr = eval_truncated(series, n, args.max_order, ctx)
            q = quad_moment_pair(n, s, ctx)
            err = abs(q - tr)
            rep.results.append(
                {"n": n, "series": _dec(tr, ctx.digits), "quadrature": _dec(q, ctx.digits), "abs_error": _dec(err, 6)}
            )
            rep.lines.append(f"n={n:<6} series={_short(tr)}  quad={_short(q)}  |err|={_short(err)}")
    return rep


def cmd_norms(args, ctx: PrecisionContext) -> RunReport:
    if args.r < 2:
        raise _ArgError("--r must be >= 2")
    if args.samples < 1000:
        raise _ArgError("--samples must be >= 1000")
    if args.n < 1:
        raise _ArgError("--n must be >= 1")
    if args.workers < 1:
        raise _ArgError("--workers must be >= 1")
    s = _parse_s(args.s)
    rep = RunReport("norms", {"r": args.r, "s": args.s, "n": args.n, "samples": args.samples, "workers": args.workers})
    rep.columns = ["quantity", "value"]
    est, se = mc_norm_moment(args.r, args.n, float(s), args.samples, ctx, workers=args.workers)
    pred = rdim_leading(args.r, s, args.n, ctx)
    limit = rdim_prefactor(args.r, s)
    rows = [
        ("mc_estimate", repr(est)),
        ("standard_error", repr(se)),
        ("seed", str(ctx.rng_seed)),
        ("leading_prediction", _dec(pred, ctx.digits)),
        ("z_score_vs_prediction", f"{(est - float(pred)) / se:.4f}"),
        ("limit_r_over_r_plus_s", str(limit) if isinstance(limit, Fraction) else repr(limit)),
    ]
    if args.r == 2:
        q = quad_moment_indep2(args.n, s, ctx)
        z = (est - float(q)) / se
        rows += [("quadrature", _dec(q, ctx.digits)), ("z_score_vs_quadrature", f"{z:.4f}")]
        rep.checks.append({"name": "mc_vs_quadrature_4se", "passed": abs(z) < 4, "residual": abs(est - float(q))})
    for k, v in rows:
        rep.results.append({"quantity": k, "value": v})
        rep.lines.append(f"{k:<24} {v}")
    return rep


def cmd_cdf(args, ctx: PrecisionContext) -> RunReport:
    if any(n < 1 for n in args.n):
        raise _ArgError("every n must be >= 1")
    if args.grid < 64:
        raise _ArgError("--grid must be >= 64")
    rep = RunReport("cdf", {"n": args.n, "grid": args.grid, "cross_moment": args.cross})
    rep.columns = ["n", "sup_distance", "argmax", "sup_times_n", "max_signed"]
    prev = None
    for n in args.n:
        r = sup_cdf_distance(n, args.grid)
        row = {
            "n": n,
            "sup_distance": repr(r.sup_distance),
            "argmax": repr(r.argmax),
            "sup_times_n": repr(r.sup_distance * n),
            "max_signed": repr(r.max_signed),
        }
        line = f"n={n:<6} sup|Fn-Finf|={r.sup_distance:.6g} at z={r.argmax:.6g}  n*sup={r.sup_distance * n:.6f}"
        if args.cross:
            cm = cross_moment(n, ctx)
            row["cross_moment"] = _dec(cm, ctx.digits)
            line += f"  E(Zn Zinf)={_short(cm)}"
        rep.results.append(row)
        rep.lines.append(line)
        rep.checks.append({"name": f"Fn_le_Finf_n{n}", "passed": r.max_signed <= 0.0, "residual": max(r.max_signed, 0.0)})
        if prev is not None:
            ratio = (r.sup_distance * n) / prev
            rep.checks.append(
                {"name": f"rate_band_n{n}", "passed": 0.5 <= ratio <= 2.0, "residual": abs(math.log2(ratio))}
            )
        prev = r.sup_distance * n
    return rep


def cmd_verify(args, ctx: PrecisionContext) -> RunReport:
    rep = RunReport("verify", {"suite": args.suite, "tol": args.tol})
    rep.columns = ["name", "passed", "residual", "detail"]
    for c in run_suite(args.suite, args.tol, ctx):
        rep.checks.append(c.to_json())
        rep.lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<36} residual={c.residual:.3g}  {c.detail}")
    n_fail = sum(not c["passed"] for c in rep.checks)
    rep.lines.append(f"{len(rep.checks) - n_fail}/{len(rep.checks)} checks passed")
    return rep


COMMANDS = {
    "coeffs": cmd_coeffs,
    "eval": cmd_eval,
    "moments": cmd_moments,
    "norms": cmd_norms,
    "cdf": cmd_cdf,
    "verify": cmd_verify,
}


# --------------------------------------------------------------------------
# plumbing


class _ArgError(Exception):
    pass


def number(text: str):
    x = float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--digits", type=int, default=30, help="working decimal precision (>= 15)")
    shared.add_argument("--tol", type=float, default=1e-7, help="residual tolerance for numeric checks")
    shared.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit Monte Carlo seed")
    shared.add_argument("--format", choices=("table", "json", "csv"), default="table")
    shared.add_argument("--no-timestamp", action="store_true", help="omit timestamp and wall time from JSON")
    shared.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")
    shared.add_argument("--backend", choices=("compiled", "python"), help="kernel backend (default: compiled if built)")

    parser = argparse.ArgumentParser(prog="zetanorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("coeffs", parents=[shared], help="exact coefficients I_p of the expansion of I(n)")
    p.add_argument("--max-order", type=int, default=PRINTED_TABLE_DEPTH)
    p.add_argument("--basis", choices=("poly", "alt", "both"), default="poly")

    p = sub.add_parser("eval", parents=[shared], help="truncated series against quadrature")
    p.add_argument("--n", type=number, nargs="+", default=[10, 20, 40])
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--no-quad", action="store_true", help="skip the quadrature comparison")

    p = sub.add_parser("moments", parents=[shared], help="expansion of E(Z_n^s) for Z_n = ||(U, 1-U)||_n")
    p.add_argument("--s", default="1", help="moment order (integer, fraction like 1/2, or decimal)")
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--real", action="store_true", help="use the Bell-polynomial route (automatic for non-integer s)")
    p.add_argument("--n", type=number, nargs="+", default=[20, 40])
    p.add_argument("--compare", action="store_true", help="compare against quadrature at each --n")

    p = sub.add_parser("norms", parents=[shared], help="Monte Carlo moments of the n-norm of r uniforms")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--s", default="1")
    p.add_argument("--n", type=number, default=20)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("cdf", parents=[shared], help="sup distance between the laws of Z_n and Z_inf")
    p.add_argument("--n", type=number, nargs="+", default=[16, 32, 64])
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--cross", action="store_true", help="also report E(Z_n Z_inf)")

    p = sub.add_parser("verify", parents=[shared], help="run the identity suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    return parser


def _clean_number(x):
    # integral floats from argparse render as ints so params stay tidy
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, list):
        return [_clean_number(v) for v in x]
    return x


def render(rep: RunReport, fmt: str, ctx: PrecisionContext, timestamp: bool) -> str:
    if fmt == "json":
        doc = {
            "command": rep.command,
            "params": {k: _clean_number(v) for k, v in rep.params.items()},
            "results": rep.results,
            "checks": rep.checks,
            "meta": {"digits": ctx.digits, "seed": ctx.rng_seed, "version": __version__, "backend": kernels.backend()},
        }
        if timestamp:
            doc["meta"]["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
            doc["meta"]["wall_time_s"] = round(rep.wall_time, 3)
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        rows = rep.results if rep.results else rep.checks
        cols = rep.columns
        if rep.command == "moments" and any("n" in r for r in rows):
            rows = [r for r in rows if "p" in r]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _clean_number(r.get(c, "")) for c in cols})
        return buf.getvalue()
    return "\n".join(rep.lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("zetanorm: error: a command is required", file=sys.stderr)
        return EXIT_ARGS
    try:
        if not 0 <= args.seed < 2**64:
            raise _ArgError("--seed must be a 64-bit unsigned integer")
        if not args.tol > 0:
            raise _ArgError("--tol must be positive")
        try:
            ctx = PrecisionContext(digits=args.digits, rng_seed=args.seed)
        except ValueError as exc:
            raise _ArgError(str(exc)) from None
        if args.backend:
            kernels.use_backend(args.backend)
        t0 = time.perf_counter()
        rep = COMMANDS[args.command](args, ctx)
        rep.wall_time = time.perf_counter() - t0
    except _ArgError as exc:
        print(f"zetanorm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ValueError as exc:
        print(f"zetanorm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ConvergenceError as exc:
        print(f"zetanorm {args.command}: no convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(rep, args.format, ctx, timestamp=not args.no_timestamp)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
