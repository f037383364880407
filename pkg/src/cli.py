"""Command-line front end.

Machine-readable output (documents, CSV) goes to stdout or ``--out``; the
human summary goes to stderr through rich.
"""
from __future__ import annotations

import argparse
import logging
from contextlib import nullcontext
from typing import List, Optional

import pandas as pd
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from config.commands import FAMILY_ALIASES, PRIME4_CLASSES, TWIN_BASES, epilog
from config.settings import settings
from src import analysis, documents, families
from src.core import probability_series
from src.errors import (
    DocumentError,
    InvalidParameterError,
    InvalidPulseError,
    OrderExceedsError,
    ReferenceDataError,
    SeriesConsistencyError,
    SolverConvergenceError,
    WindowUnreachableError,
)
from src.families import FamilyDescriptor
from src.pipeline.verification import TableVerifier, render_report
from src.solver import SeedStrategy, SolveTemplate, order_report, solve_phases

logger = logging.getLogger(__name__)

console = Console(stderr=True)
_strings = settings.load_ui_strings()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3


def msg(key: str, **kwargs) -> str:
    return _strings.get(key, key).format(**kwargs)


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    root = logging.getLogger()
    root.handlers[:] = [h for h in root.handlers if not isinstance(h, RichHandler)]
    root.addHandler(RichHandler(console=console, show_path=False, rich_tracebacks=False))
    root.setLevel(level)


def _written(path: Optional[str]) -> None:
    if path and path != "-":
        console.print(msg("written", path=path))


# -- generate ------------------------------------------------------------------------

def _descriptor(args: argparse.Namespace) -> FamilyDescriptor:
    family, fixed = FAMILY_ALIASES[args.family]
    if args.family == "prime4":
        family = PRIME4_CLASSES[args.cls.upper()]
    elif args.family == "twin":
        family = TWIN_BASES[args.base]
    n = fixed.get("n", args.n)
    if args.n is not None and args.n != n:
        raise InvalidParameterError(f"{args.family} has N={n}, got --n {args.n}")
    variant = args.variant
    if args.family == "prime2":
        variant = args.branch
    theta = args.theta
    if theta is not None and args.p is not None:
        raise InvalidParameterError("give either --theta or --p, not both")
    return FamilyDescriptor(family, n=n, theta_pi=theta, variant=variant)


def command_generate(args: argparse.Namespace) -> int:
    seq = families.construct(_descriptor(args), p_target=args.p)
    documents.write_sequence(seq, args.out)
    console.print(msg("generated", label=seq.label, pulses=len(seq), area=seq.total_area_pi))
    _written(args.out)
    return EXIT_OK


# -- evaluation ----------------------------------------------------------------------

def command_profile(args: argparse.Namespace) -> int:
    seq = documents.read_sequence(args.document)
    prof = analysis.profile(seq, args.eps_min, args.eps_max, args.points)
    documents.write_csv(prof.to_frame(), args.out)
    _written(args.out)
    return EXIT_OK


def command_series(args: argparse.Namespace) -> int:
    seq = documents.read_sequence(args.document)
    coeffs = probability_series(seq, args.order)
    frame = pd.DataFrame({"k": range(len(coeffs)), "coefficient": coeffs})
    documents.write_csv(frame, args.out)
    _written(args.out)
    target = analysis.design_target(seq)
    try:
        report = order_report(seq, target)
        slope = "n/a" if report.slope is None else f"{report.slope:.3f}"
        key = "series_order" if report.consistent else "series_inconsistent"
        console.print(msg(key, order=report.order, slope=slope))
    except (InvalidParameterError, OrderExceedsError) as e:
        console.print(msg("order_exceeds", error=e))
    return EXIT_OK


def _parse_areas(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise InvalidParameterError(f"cannot parse areas {text!r}") from e


def _parse_mask(text: Optional[str], n: int) -> Optional[tuple]:
    if text is None:
        return None
    if len(text) != n or set(text) - {"0", "1"}:
        raise InvalidParameterError(f"free mask must be {n} characters of 0/1, got {text!r}")
    return tuple(c == "1" for c in text)


def command_solve(args: argparse.Namespace) -> int:
    if args.template:
        base = SolveTemplate.from_letters(args.template, args.p)
        areas = base.areas_pi
    else:
        areas = _parse_areas(args.areas)
    template = SolveTemplate(areas, args.p, free_mask=_parse_mask(args.free, len(areas)),
                             annul_count=args.annul)
    strategy = SeedStrategy(analytic=not args.no_analytic, continuation=not args.no_analytic,
                            restarts=args.restarts, seed=args.seed)
    results = solve_phases(template, strategy)
    console.print(msg("solve_found", count=len(results), template=template.letters, p=template.p_target))

    table = Table(title="Branches", show_lines=False)
    table.add_column("#", justify="right")
    table.add_column("phases (π)")
    table.add_column("order", justify="right")
    table.add_column("residual", justify="right")
    for i, r in enumerate(results):
        table.add_row(str(i), ", ".join(f"{x:.4f}" for x in r.phases_pi), str(r.achieved_order),
                      f"{r.residual_norm:.1e}")
    console.print(table)

    documents.emit(documents.dump_json(documents.results_document(template, results, args.seed)), args.out)
    _written(args.out)
    return EXIT_OK


# -- verification ----------------------------------------------------------------------

def command_verify_table(args: argparse.Namespace) -> int:
    sections = args.sections if args.sections else settings.verify_sections
    strategy = SeedStrategy(restarts=args.restarts, seed=args.seed)
    verifier = TableVerifier(seeds=strategy, skip_solver=args.skip_solver)
    spinner = console.status("Regenerating tables...") if settings.show_progress else nullcontext()
    with spinner:
        report = verifier.run(sections)

    table = Table(title="Table verification")
    for col in ("section", "row", "status", "max deviation (π)", "order"):
        table.add_column(col)
    for r in report["rows"]:
        dev = "-" if r["max_deviation"] is None else f"{r['max_deviation']:.2e}"
        status = "[green]ok[/green]" if r["success"] else f"[red]FAIL[/red] {r['error']}"
        order = "-" if r["order"] is None else str(r["order"])
        table.add_row(r["section"], r["row"], status, dev, order)
    if report["count"]:
        console.print(table)

    if report["count"] == 0:
        console.print(Panel(msg("verify_empty"), style="green"))
    elif report["success"]:
        console.print(Panel(msg("verify_pass", count=report["count"]), style="green"))
    else:
        console.print(Panel(msg("verify_fail", failed=report["failed"], count=report["count"]), style="red"))

    if args.report:
        documents.emit(render_report("verify_report.md.j2", **report), args.report)
        _written(args.report)
    return EXIT_OK if report["success"] else EXIT_FAILED


def command_window(args: argparse.Namespace) -> int:
    if args.audit:
        claims = settings.load_reference_tables()["window_claims"]
        tol = args.tol if args.tol is not None else float(claims["tol"])
        rows = analysis.window_audit(tol, claims["eps"], claims)
        table = Table(title=f"Minimal N for tol {tol:g}")
        for col in ("family", "ε", "closed form", "propagator", "claimed", "match"):
            table.add_column(col)
        for r in rows:
            table.add_row(r["family"], f"{r['eps']:g}", str(r["closed_form_n"]), str(r["oracle_n"]),
                          str(r["claimed_n"]), "yes" if r["matches_claim"] else "no")
        console.print(table)
        console.print(msg("audit_note"))
        if args.out:
            documents.write_csv(pd.DataFrame(rows), args.out)
            _written(args.out)
        if args.report:
            documents.emit(render_report("window_audit.md.j2", rows=rows, tol=tol, note=msg("audit_note")),
                           args.report)
            _written(args.report)
        ok = all(r["success"] and r["methods_agree"] for r in rows)
        return EXIT_OK if ok else EXIT_FAILED

    if not args.document:
        raise InvalidParameterError("window needs a sequence document or --audit")
    seq = documents.read_sequence(args.document)
    target = args.p if args.p is not None else analysis.design_target(seq)
    tol = args.tol if args.tol is not None else 1e-4
    report = analysis.robustness_window(seq, target, tol)
    console.print(msg("window_result", p=target, tol=tol, eps_star=report.eps_star))
    payload = {"label": seq.label, "P_target": target, "tol": tol, "eps_star": report.eps_star}
    documents.emit(documents.dump_json(payload), args.out)
    _written(args.out)
    return EXIT_OK


def command_compare(args: argparse.Namespace) -> int:
    seqs = [documents.read_sequence(path) for path in args.documents]
    grid = analysis.eps_grid(args.eps_min, args.eps_max, args.points or settings.profile_points)
    report = analysis.compare(seqs, grid, args.band)
    documents.write_csv(report.deviations, args.out)
    _written(args.out)

    table = Table(title=f"max |P − {report.p_target:g}| on |ε| ≤ {report.band:g}")
    table.add_column("sequence")
    table.add_column("max deviation", justify="right")
    for label, value in report.max_deviation.items():
        table.add_row(label, f"{value:.3e}")
    console.print(table)
    best = report.best
    console.print(msg("compare_best", band=report.band, label=best, value=report.max_deviation[best]))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Construct, solve for and verify composite pulse sequences.",
        epilog=epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Build a sequence from an analytic family")
    gen.add_argument("family", choices=sorted(FAMILY_ALIASES))
    gen.add_argument("--n", type=int, default=None, help="pulse count N (family dependent)")
    gen.add_argument("--theta", type=float, default=None, help="rotation angle in units of pi")
    gen.add_argument("--p", type=float, default=None, help="target transition probability")
    gen.add_argument("--variant", default=None, help="solution branch (prime3: 1-4, prime4: a/b, pi/2: multiplier)")
    gen.add_argument("--class", dest="cls", default="ABBA", choices=["ABBA", "AAAA", "abba", "aaaa"])
    gen.add_argument("--branch", default="+", choices=["+", "-"])
    gen.add_argument("--base", default="asym", choices=sorted(TWIN_BASES))
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=command_generate)

    prof = sub.add_parser("profile", help="Transition probability over an error grid (CSV)")
    prof.add_argument("document")
    prof.add_argument("--eps-min", type=float, default=-1.0)
    prof.add_argument("--eps-max", type=float, default=1.0)
    prof.add_argument("--points", type=int, default=settings.profile_points)
    prof.add_argument("--out", default=None)
    prof.set_defaults(func=command_profile)

    ser = sub.add_parser("series", help="Probability series coefficients (CSV)")
    ser.add_argument("document")
    ser.add_argument("--order", type=int, default=12)
    ser.add_argument("--out", default=None)
    ser.set_defaults(func=command_series)

    sol = sub.add_parser("solve", help="Derive phases by annulling series coefficients")
    shape = sol.add_mutually_exclusive_group(required=True)
    shape.add_argument("--template", help="pulse letters, e.g. ABBBA")
    shape.add_argument("--areas", help="comma-separated areas in units of pi")
    sol.add_argument("--p", type=float, required=True)
    sol.add_argument("--annul", type=int, default=None, help="coefficients c1..cM to annul")
    sol.add_argument("--free", default=None, help="free-phase mask such as 01111")
    sol.add_argument("--seed", type=int, default=settings.solver_seed)
    sol.add_argument("--restarts", type=int, default=settings.solver_restarts)
    sol.add_argument("--no-analytic", action="store_true", help="random restarts only")
    sol.add_argument("--out", default=None)
    sol.set_defaults(func=command_solve)

    ver = sub.add_parser("verify-table", help="Regenerate the pinned phase tables")
    ver.add_argument("sections", nargs="*", help="any of primes, twins, half_pi (default from settings)")
    ver.add_argument("--seed", type=int, default=settings.solver_seed)
    ver.add_argument("--restarts", type=int, default=0)
    ver.add_argument("--skip-solver", action="store_true")
    ver.add_argument("--report", default=None, help="write a markdown report")
    ver.set_defaults(func=command_verify_table)

    win = sub.add_parser("window", help="Robustness window of a sequence, or the pulse-count audit")
    win.add_argument("document", nargs="?")
    win.add_argument("--p", type=float, default=None)
    win.add_argument("--tol", type=float, default=None)
    win.add_argument("--audit", action="store_true")
    win.add_argument("--out", default=None)
    win.add_argument("--report", default=None)
    win.set_defaults(func=command_window)

    cmp_ = sub.add_parser("compare", help="Deviation from target for several sequences (CSV)")
    cmp_.add_argument("documents", nargs="+")
    cmp_.add_argument("--band", type=float, default=None)
    cmp_.add_argument("--eps-min", type=float, default=-1.0)
    cmp_.add_argument("--eps-max", type=float, default=1.0)
    cmp_.add_argument("--points", type=int, default=None)
    cmp_.add_argument("--out", default=None)
    cmp_.set_defaults(func=command_compare)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except DocumentError as e:
        console.print(msg("malformed_document", error=e))
        return EXIT_INVALID
    except (InvalidParameterError, InvalidPulseError) as e:
        console.print(msg("invalid_parameters", error=e))
        return EXIT_INVALID
    except ReferenceDataError as e:
        console.print(msg("reference_data", error=e))
        return EXIT_INVALID
    except SolverConvergenceError as e:
        console.print(msg("no_convergence", error=e))
        return EXIT_NO_CONVERGENCE
    except (WindowUnreachableError, OrderExceedsError, SeriesConsistencyError) as e:
        console.print(msg("unreachable", error=e))
        return EXIT_FAILED
