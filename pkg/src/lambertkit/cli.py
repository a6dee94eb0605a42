"""Command-line interface: ``lambertkit {eval,scan,bench,constants}``.

Results go to stdout as newline-delimited JSON (default) or CSV.  Errors go
to stderr as a JSON object.  Exit codes: 0 success, 2 bad input, 3 when
``--strict`` is given and a series stopped at its term cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from . import asymptotics as asy
from . import mertens as mer
from . import series
from .arith import ArithTable, build_table
from .errors import LambertError, UsageError
from .special import EULER_GAMMA

ENGINES = ("naive", "power", "clausen", "eisenstein-q", "eisenstein-cf")
SCAN_KINDS = (
    "wigert",
    "schlomilch",
    "voronoi",
    "tauber-logd",
    "tauber-h",
    "partition",
    "singularity",
    "mertens1",
    "mertens2",
)
EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 2, 3
DEFAULT_TABLE_LIMIT = 10**6


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    tolerance: float = 1e-12
    term_cap: int = 10**6
    table_limit: int = DEFAULT_TABLE_LIMIT
    output_format: str = "json"
    seed: int = 0
    strict: bool = False

    def __post_init__(self):
        if not 1e-16 <= self.tolerance <= 1e-2:
            raise UsageError(f"tolerance must lie in [1e-16, 1e-2], got {self.tolerance}")
        if self.term_cap < 1:
            raise UsageError("term cap must be positive")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"unknown output format {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _point(text: str):
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}") from None
    return v.real if v.imag == 0.0 else v


def _json_value(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


def _emit(rows: Iterable[dict], fmt: str, out) -> None:
    rows = [{k: _json_value(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(r) + "\n")
        return
    if not rows:
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    out.write(buf.getvalue())


# -- eval --------------------------------------------------------------------

def _run_engine(engine: str, coeff: str, x, cfg: RunConfig, terms: Optional[int], depth: int):
    if engine in ("clausen", "eisenstein-q", "eisenstein-cf") and coeff != "one":
        raise UsageError(f"engine {engine} only evaluates the divisor series (--coeff one)")
    if engine == "naive":
        return series.eval_naive(coeff, x, tol=cfg.tolerance, cap=cfg.term_cap)
    if engine == "power":
        series._check_point(x)
        N = terms or series.terms_for_tolerance(x, cfg.tolerance / 2, growth=1.0)
        return series.eval_power_series(coeff, x, min(N, cfg.term_cap), tol=cfg.tolerance)
    if engine == "clausen":
        return series.eval_clausen(x, tol=cfg.tolerance, cap=cfg.term_cap)
    if engine == "eisenstein-q":
        return series.eval_eisenstein_qseries(x, N=terms or series.QSERIES_CAP, tol=cfg.tolerance)
    return series.eval_eisenstein_cf(x, depth=depth)


def cmd_eval(args, cfg: RunConfig, out) -> int:
    x = _point(args.x)
    report = _run_engine(args.engine, args.coeff, x, cfg, args.terms, args.depth)
    row = report.as_dict()
    row.update(engine=args.engine, coeff=args.coeff, point=x)
    _emit([row], cfg.output_format, out)
    if cfg.strict and report.stop_reason is not series.StopReason.TOLERANCE_MET:
        return EXIT_GUARD
    return EXIT_OK


# -- scan ----------------------------------------------------------------------

def _grid(args, default: list) -> list:
    return _float_list(args.xs) if args.xs else default


def _scan_wigert(args, cfg, table):
    scan = asy.wigert_residual_scan(
        args.order, z_start=args.z_start, halvings=args.halvings, angle=args.angle, dps=args.dps
    )
    return [
        {"order": args.order, "abs_z": r, "angle": args.angle, "residual": res, "slope": scan.fitted_exponent}
        for r, res in scan.points
    ]


def _scan_schlomilch(args, cfg, table):
    xs = _grid(args, [args.z_start / 2**j for j in range(args.halvings + 1)])
    scan = asy.schlomilch_residual_scan(args.order, xs, dps=args.dps)
    return [
        {"order": args.order, "xi": x, "residual": res, "slope": scan.fitted_exponent}
        for x, res in scan.points
    ]


def _scan_voronoi(args, cfg, table):
    rows = []
    for x in _grid(args, [0.2, 0.5, 0.9]):
        rhs = asy.voronoi_rhs(x, args.n_terms)
        direct = asy.dseries_direct(x)
        rows.append({"x": x, "n_terms": args.n_terms, "direct": direct, "rhs": rhs, "residual": abs(rhs - direct)})
    return rows


def _scan_tauber_logd(args, cfg, table):
    return [
        {"x": x, "scaled_residual": asy.tauber_logd_residual(x)}
        for x in _grid(args, [0.1, 0.05, 0.025, 0.0125])
    ]


def _scan_tauber_h(args, cfg, table):
    default = [10.0**k for k in range(3, 7) if 10**k <= cfg.table_limit]
    rows = []
    for x in _grid(args, default):
        h = asy.tauber_h(x, table)
        row = {"x": x, "h": h, "h_plus_two_gamma": h + 2 * EULER_GAMMA}
        if 2 * x <= table.limit:
            row["window_mean_plus_two_gamma"] = asy.tauber_h_window_mean(x, table) + 2 * EULER_GAMMA
        else:
            row["window_mean_plus_two_gamma"] = None
        rows.append(row)
    return rows


def _scan_partition(args, cfg, table):
    rows = []
    for x in _grid(args, [k / 10 for k in range(1, 10)]):
        b = asy.partition_log_check(x)
        rows.append(
            {
                "x": x,
                "lhs": b.lhs,
                "mid": b.mid,
                "rhs": b.rhs,
                "lhs_lt_mid": b.lhs < b.mid,
                "mid_lt_rhs": b.mid < b.rhs,
                "mid_over_pi2_6": b.mid / (math.pi**2 / 6),
            }
        )
    return rows


def _scan_singularity(args, cfg, table):
    rs = _grid(args, [1.0 - 2.0**-j for j in range(4, 13)])
    rows = []
    for r in rs:
        pr = series.singularity_probe(args.p, args.q, r)
        rows.append(
            {
                "p": pr.p,
                "q": pr.q,
                "r": r,
                "major_arc": pr.major_arc,
                "major_lower_bound": pr.major_lower_bound,
                "minor_arc_abs": abs(pr.minor_arc),
                "minor_upper_bound": pr.minor_upper_bound,
                "scaled_abs_total": abs(pr.total),
                "bounds_hold": pr.bounds_hold,
                "terms_used": pr.terms_used,
            }
        )
    return rows


def _scan_mertens1(args, cfg, table):
    scan = mer.mertens_first_check(_grid(args, [0.5, 0.1, 0.01, 0.001]))
    return [
        {"rho": r, "residual": res, "linear_slope": scan.linear_slope, "fitted_exponent": scan.fitted_exponent}
        for r, res in scan.points
    ]


def _scan_mertens2(args, cfg, table):
    default = [10.0**k for k in range(3, 7) if 10**k <= cfg.table_limit]
    return mer.mertens_second_rows(_grid(args, default), table)


_SCANS = {
    "wigert": (_scan_wigert, False),
    "schlomilch": (_scan_schlomilch, False),
    "voronoi": (_scan_voronoi, False),
    "tauber-logd": (_scan_tauber_logd, False),
    "tauber-h": (_scan_tauber_h, True),
    "partition": (_scan_partition, False),
    "singularity": (_scan_singularity, False),
    "mertens1": (_scan_mertens1, False),
    "mertens2": (_scan_mertens2, True),
}


def cmd_scan(args, cfg: RunConfig, out) -> int:
    fn, needs_table = _SCANS[args.kind]
    table: Optional[ArithTable] = build_table(cfg.table_limit) if needs_table else None
    rows = [dict(kind=args.kind, **r) for r in fn(args, cfg, table)]
    _emit(rows, cfg.output_format, out)
    return EXIT_OK


# -- bench ----------------------------------------------------------------------

def cmd_bench(args, cfg: RunConfig, out) -> int:
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    if len(set(engines)) < 2:
        raise UsageError("bench needs at least two distinct engines")
    for e in engines:
        if e not in ENGINES:
            raise UsageError(f"unknown engine {e!r}; expected one of {ENGINES}")
    rows = []
    for x in _float_list(args.xs):
        ref = series.eval_power_series("one", x, series.terms_for_tolerance(x, 1e-17)).value
        block = []
        for e in engines:
            t0 = time.perf_counter()
            rep = _run_engine(e, "one", x, cfg, None, args.depth)
            elapsed = time.perf_counter() - t0
            err = abs(rep.value - ref)
            row = {
                "engine": e,
                "x": x,
                "terms_used": rep.terms_used,
                "error": err,
                "meets_tolerance": err <= cfg.tolerance * max(1.0, abs(ref)),
            }
            if not args.no_timing:
                row["wall_time_s"] = elapsed
            block.append(row)
        ok = [r for r in block if r["meets_tolerance"]] or block
        best = min(ok, key=lambda r: (r["terms_used"], r["error"]))["engine"]
        for r in block:
            r["winner"] = best
        rows.extend(block)
    _emit(rows, cfg.output_format, out)
    return EXIT_OK


# -- constants -------------------------------------------------------------------

def cmd_constants(args, cfg: RunConfig, out) -> int:
    rep = mer.mertens_report(prime_limit=args.prime_limit, m_cap=args.m_cap)
    row = {
        "H_mobius": rep.H_mobius,
        "H_direct": rep.H_direct,
        "H_direct_tail_bound": rep.tail_bound_direct,
        "agreement": rep.agreement,
        "gamma": EULER_GAMMA,
        "two_gamma": 2 * EULER_GAMMA,
        "provenance": {
            "H_mobius": f"-sum mu(n) log zeta(n)/n over n=2..{rep.terms_mobius + 1}",
            "H_direct": f"sum 1/(m p^m), p <= {rep.prime_limit_direct}, 2 <= m <= {rep.m_cap_direct}",
            "gamma": "double-precision literal",
            "two_gamma": "2 * gamma",
        },
    }
    if cfg.output_format == "csv":
        row.pop("provenance")
    _emit([row], cfg.output_format, out)
    return EXIT_OK


# -- wiring --------------------------------------------------------------------------

def _env_table_limit() -> int:
    raw = os.environ.get("LAMBERT_TABLE_LIMIT")
    if raw is None:
        return DEFAULT_TABLE_LIMIT
    try:
        return int(float(raw))
    except ValueError:
        raise UsageError(f"LAMBERT_TABLE_LIMIT must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-12)
    common.add_argument("--term-cap", type=int, default=10**6)
    common.add_argument("--table-limit", type=int, default=None, help="sieve size (env LAMBERT_TABLE_LIMIT)")
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--strict", action="store_true", help="exit 3 if a term cap is hit")

    parser = _Parser(prog="lambertkit", description="Lambert series evaluation and checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate one Lambert series")
    p.add_argument("--coeff", default="one", choices=series.COEFFICIENT_NAMES)
    p.add_argument("--x", "--z", dest="x", required=True, help="point, real or complex (e.g. 0.3+0.2j)")
    p.add_argument("--engine", default="naive", choices=ENGINES)
    p.add_argument("--terms", type=int, default=None, help="term count for power / eisenstein-q")
    p.add_argument("--depth", type=int, default=60, help="continued-fraction depth")

    p = sub.add_parser("scan", parents=[common], help="residual and bound scans")
    p.add_argument("--kind", required=True, choices=SCAN_KINDS)
    p.add_argument("--xs", "--x", "--rhos", "--rs", dest="xs", default=None, help="comma-separated grid")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--z-start", type=float, default=0.2)
    p.add_argument("--halvings", type=int, default=5)
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--dps", type=int, default=asy.SCAN_DPS)
    p.add_argument("--n-terms", type=int, default=50)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=2)

    p = sub.add_parser("bench", parents=[common], help="compare engines on the divisor series")
    p.add_argument("--engines", default=",".join(ENGINES))
    p.add_argument("--xs", default="0.1,0.5,0.9")
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--no-timing", action="store_true", help="omit wall times (byte-stable output)")

    p = sub.add_parser("constants", parents=[common], help="Mertens constant by two routes")
    p.add_argument("--prime-limit", type=int, default=10**7)
    p.add_argument("--m-cap", type=int, default=64)
    return parser


_COMMANDS = {"eval": cmd_eval, "scan": cmd_scan, "bench": cmd_bench, "constants": cmd_constants}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        limit = args.table_limit if args.table_limit is not None else _env_table_limit()
        cfg = RunConfig(
            subcommand=args.subcommand,
            tolerance=args.tolerance,
            term_cap=args.term_cap,
            table_limit=limit,
            output_format=args.output_format,
            seed=args.seed,
            strict=args.strict,
        )
        return _COMMANDS[args.subcommand](args, cfg, out)
    except LambertError as exc:
        err.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
