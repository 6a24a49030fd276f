"""Command-line entry point: ``cuspforms <command> [options]``.

Exit codes: 0 success, 1 usage, 2 unreadable input, 3 precondition violated,
4 verification failed.  Failures also print a one-line JSON record to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import exhaustion, glue, hodge_min
from .errors import CuspFormsError, NormOverflowError, PreconditionError, VerificationError
from .gridded import CuspGrid
from .laurent import Annulus, LaurentSeries, norm_sq, period
from .quadrature import QuadratureSpec, annulus_norm_sq, contour_period, grid_exterior_derivative

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3, 4
TOL_ENV = "CUSPFORMS_VERIFY_TOL"
DEFAULT_TOL = 1e-10
COMMANDS = ("norm", "period", "minimize", "glue", "scan", "verify")
# options whose values may legitimately start with '-'
_SIGNED_OPTIONS = ("--window", "--rho-list", "--p", "--a", "--r", "--R")


class UsageError(Exception):
    pass


class InputParseError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    parameters: dict[str, Any] = field(default_factory=dict)


# -- option value parsers -----------------------------------------------------


def parse_window(text: str) -> tuple[int, int]:
    """``"a:b"`` -> ``(a, b)`` with integer ``a <= b``."""
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI with integers, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def parse_rho_list(text: str) -> tuple[float, ...]:
    """``"x:y[:N]"`` -> N log-spaced radii from x down to y (two per decade by default)."""
    parts = text.split(":")
    try:
        if len(parts) not in (2, 3):
            raise ValueError
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"rho list must look like START:STOP[:COUNT], got {text!r}")
    try:
        return exhaustion.log_rho_list(start, stop, count)
    except PreconditionError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return positive_float(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{TOL_ENV}: {exc}")


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cuspforms", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name, help_text, needs_input=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if needs_input:
            p.add_argument("-i", "--input", required=True, metavar="PATH",
                           help="series file (JSON); '-' reads stdin")
        p.add_argument("-o", "--output", metavar="PATH", help="write the result here instead of stdout")
        return p

    p = add("norm", "closed-form squared norm and quadrature oracle on rho < |z| < outer")
    p.add_argument("--rho", type=float, default=0.5, help="inner radius (default 0.5)")
    p.add_argument("--outer", type=float, default=1.0, help="outer radius (default 1)")
    p.add_argument("--radial-nodes", type=int, default=64)
    p.add_argument("--angular-nodes", type=int, default=256)

    p = add("period", "period from the z^-1 coefficient and from a contour integral")
    p.add_argument("--radius", type=positive_float, default=0.5, help="contour radius (default 0.5)")
    p.add_argument("--nodes", type=int, default=256, help="trapezoid nodes (default 256)")

    p = add("minimize", "least-norm series of period p on rho < |z| < 1", needs_input=False)
    p.add_argument("--p", type=float, required=True, help="period")
    p.add_argument("--rho", type=float, required=True, help="inner radius")
    p.add_argument("--window", type=parse_window, default=(-10, 10),
                   help="coefficient window LO:HI (default -10:10)")

    p = add("glue", "glue the input to p dt across the cusp mouth and sample it on a grid")
    p.add_argument("--p", type=float, help="period (default: the series' own period)")
    p.add_argument("--n-r", type=int, default=128, help="intervals in r (default 128)")
    p.add_argument("--n-t", type=int, default=128, help="points on each horocycle (default 128)")
    p.add_argument("--r-hi", type=float, default=0.25, help="top of the grid (default 0.25)")
    p.add_argument("--levels", type=int, default=3, help="grids in the curl convergence study (default 3)")
    p.add_argument("--diagnostics", metavar="PATH",
                   help="write diagnostics here (default: stdout, or alongside the form when -o is absent)")

    p = add("scan", "sample norms towards the puncture and classify the singularity")
    p.add_argument("--rho-list", type=parse_rho_list, default=parse_rho_list("1e-1:1e-6"),
                   help="START:STOP[:COUNT] log-spaced radii (default 1e-1:1e-6, two per decade)")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("verify", "inequality suite on cusp bands; exit 4 on a negative slack")
    p.add_argument("--p", type=float, help="period (default: the series' own period)")
    p.add_argument("--a", type=parse_float_list, default=(0.0,), help="comma list (default 0)")
    p.add_argument("--r", type=parse_float_list, default=(1.0,), help="comma list (default 1)")
    p.add_argument("--R", type=parse_float_list, default=(2.0,), help="comma list (default 2)")
    p.add_argument("--core-norm", type=float, help="|alpha|^2 on the mouth (default: computed)")
    p.add_argument("--tol", type=positive_float,
                   help=f"slack tolerance (default ${TOL_ENV} or {DEFAULT_TOL})")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def normalize_argv(argv: list[str]) -> list[str]:
    """Attach values that begin with '-' (``--window -5:5``) to their option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_config(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(normalize_argv(argv))
    if args.command is None:
        raise UsageError("cuspforms: a command is required (one of " + ", ".join(COMMANDS) + ")")
    params = {k: v for k, v in vars(args).items() if k not in ("command", "input", "output")}
    if args.command == "verify" and params.get("tol") is None:
        params["tol"] = default_tolerance()
    return RunConfig(args.command, getattr(args, "input", None), args.output, params)


# -- I/O ----------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputParseError(f"cannot read {path}: {exc.strerror}")


def read_series(path: str) -> LaurentSeries:
    try:
        return LaurentSeries.loads(_read_text(path))
    except InputParseError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputParseError(f"{path}: not a series file ({exc})")


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- commands -----------------------------------------------------------------


def cmd_norm(cfg: RunConfig) -> int:
    s = read_series(cfg.input_path)
    prm = cfg.parameters
    ann = Annulus(prm["rho"], prm["outer"])
    spec = QuadratureSpec(radial_nodes=prm["radial_nodes"], angular_nodes=prm["angular_nodes"])
    exact = norm_sq(s, ann)
    oracle = annulus_norm_sq(s, ann, spec)
    gap = abs(exact - oracle) / abs(exact) if exact else abs(oracle)
    _emit(dumps({"rho": ann.rho, "outer": ann.outer, "norm_sq": exact,
                 "oracle_norm_sq": oracle, "relative_gap": gap}), cfg.output_path)
    return EXIT_OK


def cmd_period(cfg: RunConfig) -> int:
    s = read_series(cfg.input_path)
    prm = cfg.parameters
    value = period(s)
    contour = contour_period(s, prm["radius"], QuadratureSpec(contour_nodes=prm["nodes"]))
    _emit(dumps({"period": value, "contour_period": contour, "radius": prm["radius"],
                 "nodes": prm["nodes"], "abs_gap": abs(value - contour)}), cfg.output_path)
    return EXIT_OK


def cmd_minimize(cfg: RunConfig) -> int:
    prm = cfg.parameters
    prob = hodge_min.MinimizationProblem(prm["p"], Annulus(prm["rho"]), prm["window"])
    sol = hodge_min.minimize_in_class(prob)
    report = hodge_min.optimality_report(prob, sol).to_dict()
    if cfg.output_path is None:
        _emit(dumps({"series": sol.to_dict(), "diagnostics": report}), None)
    else:
        _emit(sol.dumps() + "\n", cfg.output_path)
        _emit(dumps(report), None)
    return EXIT_OK


def cmd_glue(cfg: RunConfig) -> int:
    s = read_series(cfg.input_path)
    prm = cfg.parameters
    p = period(s) if prm["p"] is None else prm["p"]
    grid = CuspGrid(glue.R_FLOOR, prm["r_hi"], prm["n_r"], prm["n_t"])
    alpha = glue.build_alpha(s, p, grid)
    periods = glue.horocycle_periods(alpha)
    curl = grid_exterior_derivative(alpha)
    sups, orders = glue.curl_convergence(s, p, grid, levels=max(prm["levels"], 1))
    diag = {
        "p": p,
        "grid": {"r_lo": grid.r_lo, "r_hi": grid.r_hi, "n_r": grid.n_r, "n_t": grid.n_t},
        "max_period_error": float(np.max(np.abs(periods - p))),
        "curl_sup": float(np.max(np.abs(curl))),
        "curl_sup_by_level": sups.tolist(),
        "curl_orders": [o if np.isfinite(o) else None for o in orders.tolist()],
    }
    if cfg.output_path is None and prm["diagnostics"] is None:
        _emit(dumps({"form": alpha.to_dict(), "diagnostics": diag}), None)
        return EXIT_OK
    if cfg.output_path is not None:
        _emit(alpha.dumps() + "\n", cfg.output_path)
    _emit(dumps(diag), prm["diagnostics"])
    return EXIT_OK


def growth_csv(record: exhaustion.GrowthRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("rho", "norm_sq", "ring_norm_sq", "ring_excess_norm_sq"))
    for k, (rho, val) in enumerate(zip(record.rho_values, record.norm_values)):
        ring = (repr(record.band_values[k - 1]), repr(record.excess_band_values[k - 1])) if k else ("", "")
        w.writerow((repr(rho), repr(val)) + ring)
    return buf.getvalue()


def cmd_scan(cfg: RunConfig) -> int:
    s = read_series(cfg.input_path)
    prm = cfg.parameters
    record = exhaustion.growth_scan(s, prm["rho_list"])
    verdict = exhaustion.classify(record, s)
    if prm["format"] == "csv":
        _emit(growth_csv(record), cfg.output_path)
        if cfg.output_path is not None:
            _emit(dumps(verdict.to_dict()), None)
    else:
        _emit(dumps({"record": record.to_dict(), "classification": verdict.to_dict()}), cfg.output_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    s = read_series(cfg.input_path)
    prm = cfg.parameters
    p = period(s) if prm["p"] is None else prm["p"]
    records = []
    for a in prm["a"]:
        for r in prm["r"]:
            for R in prm["R"]:
                records += exhaustion.inequality_suite(s, p, a, r, R, prm["core_norm"], prm["tol"])
    if prm["format"] == "csv":
        _emit(exhaustion.records_to_csv(records), cfg.output_path)
    else:
        _emit(dumps([rec.to_dict() for rec in records]), cfg.output_path)
    failed = [rec for rec in records if not rec.passed]
    if failed:
        worst = min(failed, key=lambda rec: rec.slack)
        raise VerificationError(
            f"{len(failed)} inequality rows have slack below -{prm['tol']}; worst {worst.name} "
            f"at a={worst.a}, r={worst.r}, R={worst.R}: {worst.slack!r}"
        )
    return EXIT_OK


HANDLERS = {"norm": cmd_norm, "period": cmd_period, "minimize": cmd_minimize,
            "glue": cmd_glue, "scan": cmd_scan, "verify": cmd_verify}


def run(config: RunConfig) -> int:
    return HANDLERS[config.command](config)


def _fail(code: int, exc: BaseException) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return run(config)
    except InputParseError as exc:
        return _fail(EXIT_PARSE, exc)
    except VerificationError as exc:
        return _fail(EXIT_VERIFY, exc)
    except (PreconditionError, NormOverflowError, CuspFormsError, ValueError) as exc:
        return _fail(EXIT_PRECONDITION, exc)
    except OSError as exc:
        return _fail(EXIT_PARSE, exc)


if __name__ == "__main__":
    sys.exit(main())
