"""
cli.py - gradmult command line
==============================

Every subcommand reads a JSON workspace (-w FILE), writes one JSON object to
stdout (sorted keys, rationals as "p/q" strings) and optionally a CSV file.
Logs go to stderr and, when configured, to a log file.

Run it as a module:
    python -m gradmult colength -w workspace.json --ideal I
    python -m gradmult check minkowski -w workspace.json --families FM,FI

Exit codes:
    0  pass (or evidence-only without --strict)
    1  failed check, or evidence-only with --strict
    2  usage / parse error
    3  computation cap exceeded
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Sequence

from .errors import GradmultError, UsageError
from .family_limits import (
    comparison_check,
    double_limit_check,
    family_G_value,
    family_mixed_multiplicities,
    general_family_G_value,
    general_family_mixed_multiplicities,
    general_volume_equals_multiplicity,
    one_family_check,
    volume_equals_multiplicity,
)
from .graded_families import (
    GradedFamily,
    linear_growth_report,
    setup_growth_report,
    verify_filtration,
    verify_graded,
)
from .lattice_length import colength
from .monomial_core import MonomialIdeal, krull_dimension
from .multiplicity_poly import MultiplicityTable, general_mixed_multiplicities, mixed_multiplicities
from .newton_geometry import (
    covolume,
    integral_closure_power,
    mixed_covolume_table,
    newton_halfspaces,
    scaled_staircase_body,
)
from .report_store import ReportStore
from .reports import CheckReport, Verdict, ideal_to_json, rational_str
from .settings import EngineSettings, load_settings
from .suite_runner import load_suite, run_suite
from .theorem_suite import additivity_check, associativity_check, minkowski_check, nilradical_hypothesis
from .workspace import WorkspaceDocument, parse_workspace

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class CommandResult:
    """JSON payload of one command plus the reports that decide the exit code."""

    payload: Dict[str, Any]
    reports: List[CheckReport] = field(default_factory=list)
    csv_header: List[str] = field(default_factory=list)
    csv_rows: List[List[Any]] = field(default_factory=list)
    errors: int = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ============================================================================
# ARGUMENT HELPERS
# ============================================================================

def _names(text: Optional[str], flag: str, allow_empty: bool = False) -> List[str]:
    names = [part.strip() for part in (text or "").split(",") if part.strip()]
    if not names and not allow_empty:
        raise UsageError(f"{flag} needs at least one name")
    return names


def _ints(text: str, flag: str) -> List[int]:
    try:
        values = [int(part) for part in _names(text, flag)]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got '{text}'")
    return values


def _module(args, doc: WorkspaceDocument) -> Optional[MonomialIdeal]:
    name = getattr(args, "module", None)
    return doc.ideal(name) if name else doc.quotient


def _families(doc: WorkspaceDocument, text: Optional[str], flag: str,
              allow_empty: bool = False) -> List[GradedFamily]:
    return [doc.family(name) for name in _names(text, flag, allow_empty)]


def _module_degree(Q: Optional[MonomialIdeal], doc: WorkspaceDocument) -> int:
    return doc.ring.dimension if Q is None else krull_dimension(Q)


def _table_rows(table: MultiplicityTable) -> List[List[Any]]:
    return [[",".join(map(str, t)), rational_str(v)] for t, v in sorted(table.entries.items(), reverse=True)]


def _table_result(table: MultiplicityTable, extra: Dict[str, Any]) -> CommandResult:
    payload = table.to_dict()
    payload.update(extra)
    return CommandResult(payload, csv_header=["type", "e"], csv_rows=_table_rows(table))


def _report_result(report: CheckReport) -> CommandResult:
    return CommandResult(report.to_dict(), reports=[report])


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_colength(args, doc, settings) -> CommandResult:
    I = doc.ideal(args.ideal)
    return CommandResult({"ideal": ideal_to_json(I), "colength": str(colength(I))})


def cmd_multiplicity(args, doc, settings) -> CommandResult:
    I = doc.ideal(args.ideal)
    Q = _module(args, doc)
    degree = _module_degree(Q, doc)
    table = mixed_multiplicities(Q, [I], settings, degree=degree)
    return CommandResult({"ideal": ideal_to_json(I), "module": ideal_to_json(Q) if Q is not None else None,
                          "degree": degree, "e": rational_str(table[(degree,)])})


def cmd_mixed(args, doc, settings) -> CommandResult:
    names = _names(args.ideals, "--ideals")
    Q = _module(args, doc)
    table = mixed_multiplicities(Q, [doc.ideal(n) for n in names], settings, degree=_module_degree(Q, doc))
    return _table_result(table, {"ideals": names})


def cmd_general_mixed(args, doc, settings) -> CommandResult:
    names = _names(args.ideals, "--ideals", allow_empty=True)
    table = general_mixed_multiplicities(doc.ideal(args.primary), [doc.ideal(n) for n in names], settings)
    return _table_result(table, {"primary": args.primary, "ideals": names})


def cmd_family_value(args, doc, settings) -> CommandResult:
    families = _families(doc, args.families, "--families")
    point = _ints(args.point, "--point")
    if args.primary_family:
        estimate = general_family_G_value(doc.family(args.primary_family), families, point,
                                          args.strategy, args.horizon, settings)
    else:
        Q = _module(args, doc)
        estimate = family_G_value(Q, families, point, args.strategy, args.horizon, settings,
                                  degree=None if Q is None else krull_dimension(Q))
    payload = estimate.to_dict()
    payload["point"] = point
    rows = [[m, rational_str(r)] for m, r in estimate.samples]
    return CommandResult(payload, csv_header=["m", "ratio"], csv_rows=rows)


def cmd_family_mixed(args, doc, settings) -> CommandResult:
    names = _names(args.families, "--families")
    Q = _module(args, doc)
    table = family_mixed_multiplicities(Q, [doc.family(n) for n in names], args.strategy, args.horizon,
                                        settings, degree=None if Q is None else krull_dimension(Q))
    return _table_result(table, {"families": names})


def cmd_general_family_mixed(args, doc, settings) -> CommandResult:
    names = _names(args.families, "--families", allow_empty=True)
    table = general_family_mixed_multiplicities(doc.family(args.primary_family), [doc.family(n) for n in names],
                                                args.strategy, args.horizon, settings,
                                                record_growth=args.growth)
    return _table_result(table, {"primary": args.primary_family, "families": names})


def cmd_vol_mult(args, doc, settings) -> CommandResult:
    report = volume_equals_multiplicity(_module(args, doc), _families(doc, args.families, "--families"),
                                        _ints(args.type, "--type"), _ints(args.p, "--p"), settings,
                                        args.strategy, args.horizon)
    result = _report_result(report)
    result.csv_header = ["p", "ratio"]
    result.csv_rows = report.lhs["ratios"]
    return result


def cmd_newton(args, doc, settings) -> CommandResult:
    if args.body:
        vertices = scaled_staircase_body(doc.family(args.body), args.at)
        rows = [[rational_str(v) for v in vertex] for vertex in vertices]
        return CommandResult({"family": args.body, "n": args.at, "vertices": rows},
                             csv_header=list(doc.ring.variables), csv_rows=rows)
    if args.mixed:
        names = _names(args.mixed, "--mixed")
        return _table_result(mixed_covolume_table([doc.ideal(n) for n in names]), {"ideals": names})
    if not args.ideal:
        raise UsageError("newton needs --ideal for this mode")
    I = doc.ideal(args.ideal)
    if args.covolume:
        value = covolume(I)
        return CommandResult({"ideal": ideal_to_json(I), "covolume": rational_str(value),
                              "e": rational_str(value * factorial(I.dimension))})
    if args.closure_power is not None:
        closure = integral_closure_power(I, args.closure_power)
        return CommandResult({"ideal": ideal_to_json(I), "n": args.closure_power,
                              "closure": ideal_to_json(closure)})
    halfspaces = [{"normal": list(w), "rhs": b} for w, b in newton_halfspaces(I)]
    return CommandResult({"ideal": ideal_to_json(I), "halfspaces": halfspaces},
                         csv_header=[f"w_{v}" for v in doc.ring.variables] + ["rhs"],
                         csv_rows=[h["normal"] + [h["rhs"]] for h in halfspaces])


# ---------------------------------------------------------------------------- checks

def _horizon(args, doc, settings) -> int:
    return args.horizon or settings.horizon_for(doc.ring.dimension)


def check_graded(args, doc, settings) -> CheckReport:
    return verify_graded(doc.family(args.family), _horizon(args, doc, settings))


def check_filtration(args, doc, settings) -> CheckReport:
    return verify_filtration(doc.family(args.family), _horizon(args, doc, settings))


def check_linear_growth(args, doc, settings) -> CheckReport:
    return linear_growth_report(doc.family(args.larger), doc.family(args.smaller),
                                args.c_max if args.c_max is not None else settings.c_max,
                                _horizon(args, doc, settings))


def check_setup_growth(args, doc, settings) -> CheckReport:
    return setup_growth_report(doc.family(args.larger), doc.family(args.smaller),
                               args.c_max if args.c_max is not None else settings.c_max,
                               _horizon(args, doc, settings), _ints(args.p, "--p"))


def check_nilradical(args, doc, settings) -> CheckReport:
    Q = doc.ideal(args.ideal) if args.ideal else _module(args, doc)
    if Q is None:
        raise UsageError("nilradical needs --ideal, --module or a ring quotient")
    return nilradical_hypothesis(Q)


def check_additivity(args, doc, settings) -> CheckReport:
    f = _ints(args.f, "--f")
    return additivity_check(_module(args, doc), f, _families(doc, args.families, "--families"), settings,
                            args.strategy, args.horizon, degree=args.degree)


def check_associativity(args, doc, settings) -> CheckReport:
    return associativity_check(_module(args, doc), _families(doc, args.families, "--families"), settings,
                               args.strategy, args.horizon)


def check_minkowski(args, doc, settings) -> CheckReport:
    families = _families(doc, args.families, "--families")
    if len(families) != 2:
        raise UsageError("minkowski needs exactly two families")
    return minkowski_check(families[0], families[1], _module(args, doc), settings, args.strategy, args.horizon)


def check_comparison(args, doc, settings) -> CheckReport:
    return comparison_check(doc.family(args.primary_family),
                            _families(doc, args.families, "--families", allow_empty=True),
                            args.strategy, args.horizon, settings)


def check_double_limit(args, doc, settings) -> CheckReport:
    return double_limit_check(_families(doc, args.primary_families, "--primary-families"),
                              _families(doc, args.families, "--families", allow_empty=True),
                              _ints(args.m, "--m"), _ints(args.n, "--n") if args.n else [],
                              _ints(args.p, "--p"), _ints(args.m_list, "--m-list"), settings, args.horizon)


def check_general_vol_mult(args, doc, settings) -> CheckReport:
    return general_volume_equals_multiplicity(doc.family(args.primary_family),
                                              _families(doc, args.families, "--families", allow_empty=True),
                                              _ints(args.type, "--type"), _ints(args.p, "--p"), settings,
                                              args.strategy, args.horizon)


def check_one_family(args, doc, settings) -> CheckReport:
    return one_family_check(_module(args, doc), doc.family(args.family), args.copies, settings,
                            args.strategy, args.horizon)


CHECKS: Dict[str, Callable[..., CheckReport]] = {
    "graded": check_graded,
    "filtration": check_filtration,
    "linear-growth": check_linear_growth,
    "setup-growth": check_setup_growth,
    "nilradical": check_nilradical,
    "additivity": check_additivity,
    "associativity": check_associativity,
    "minkowski": check_minkowski,
    "comparison": check_comparison,
    "double-limit": check_double_limit,
    "general-vol-mult": check_general_vol_mult,
    "one-family": check_one_family,
}


def cmd_check(args, doc, settings) -> CommandResult:
    return _report_result(CHECKS[args.check](args, doc, settings))


def cmd_report(args, doc, settings) -> CommandResult:
    items = load_suite(args.suite)
    store = ReportStore(args.store) if args.store else None
    try:
        suite = run_suite(items, lambda argv: execute(argv, doc, settings), settings.workers,
                          store=store, run_id=args.run_id)
    finally:
        if store is not None:
            store.close()
    rows = [[o.item.name, o.status] for o in suite.outcomes]
    return CommandResult(suite.to_dict(), reports=suite.reports, csv_header=["item", "status"], csv_rows=rows,
                         errors=suite.errors)


COMMANDS: Dict[str, Callable[..., CommandResult]] = {
    "colength": cmd_colength,
    "multiplicity": cmd_multiplicity,
    "mixed": cmd_mixed,
    "general-mixed": cmd_general_mixed,
    "family-value": cmd_family_value,
    "family-mixed": cmd_family_mixed,
    "general-family-mixed": cmd_general_family_mixed,
    "vol-mult": cmd_vol_mult,
    "check": cmd_check,
    "newton": cmd_newton,
    "report": cmd_report,
}


# ============================================================================
# PARSER
# ============================================================================

def _global_flags(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument("--log-level", default=default, help="Logging level (default: INFO)")
    parser.add_argument("--workers", type=int, default=default, help="Worker threads for sampling and suites")
    parser.add_argument("--strict", action="store_true", default=default,
                        help="Treat evidence-only verdicts as failures")
    parser.add_argument("--csv", default=default, help="Also write a CSV file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="python -m gradmult", description="Mixed multiplicities of graded families of monomial ideals")
    _global_flags(parser, None)
    parser.set_defaults(strict=False)
    shared = _Parser(add_help=False)
    _global_flags(shared, argparse.SUPPRESS)
    shared.add_argument("-w", "--workspace", help="Workspace JSON file")

    limits = _Parser(add_help=False)
    limits.add_argument("--strategy", choices=["exact", "sequence"], default="exact")
    limits.add_argument("--horizon", type=int, default=None)
    limits.add_argument("--module", help="Ideal Q of the module R/Q (default: ring quotient)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("colength", parents=[shared], help="λ(R/I)")
    p.add_argument("--ideal", required=True)

    p = sub.add_parser("multiplicity", parents=[shared], help="e(M; I)")
    p.add_argument("--ideal", required=True)
    p.add_argument("--module")

    p = sub.add_parser("mixed", parents=[shared], help="Mixed multiplicities of ideals")
    p.add_argument("--ideals", required=True)
    p.add_argument("--module")

    p = sub.add_parser("general-mixed", parents=[shared], help="Mixed multiplicities with a non-m-primary part")
    p.add_argument("--primary", required=True)
    p.add_argument("--ideals", default="")

    p = sub.add_parser("family-value", parents=[shared, limits], help="G(𝐦) of families")
    p.add_argument("--families", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--primary-family", help="Use the general G with this m-primary family")

    p = sub.add_parser("family-mixed", parents=[shared, limits], help="Mixed multiplicities of families")
    p.add_argument("--families", required=True)

    p = sub.add_parser("general-family-mixed", parents=[shared, limits],
                       help="Mixed multiplicities of families with a non-m-primary part")
    p.add_argument("--primary-family", required=True)
    p.add_argument("--families", default="")
    p.add_argument("--growth", action="store_true", help="Record linear-growth evidence")

    p = sub.add_parser("vol-mult", parents=[shared, limits], help="Volume = multiplicity ratios")
    p.add_argument("--families", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--p", required=True)

    p = sub.add_parser("check", parents=[shared, limits], help="Run one check")
    p.add_argument("check", choices=sorted(CHECKS))
    p.add_argument("--family")
    p.add_argument("--families")
    p.add_argument("--primary-family")
    p.add_argument("--primary-families")
    p.add_argument("--larger")
    p.add_argument("--smaller")
    p.add_argument("--ideal")
    p.add_argument("--f")
    p.add_argument("--degree", type=int)
    p.add_argument("--c-max", type=int)
    p.add_argument("--copies", type=int, default=2)
    p.add_argument("--type")
    p.add_argument("--p", default="1,2,4,8")
    p.add_argument("--m")
    p.add_argument("--n")
    p.add_argument("--m-list", default="1,2,4,8")

    p = sub.add_parser("newton", parents=[shared], help="Newton polyhedron data")
    p.add_argument("--ideal")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--covolume", action="store_true")
    mode.add_argument("--closure-power", type=int)
    mode.add_argument("--body")
    mode.add_argument("--mixed")
    mode.add_argument("--halfspaces", action="store_true")
    p.add_argument("--at", type=int, default=1)

    p = sub.add_parser("report", parents=[shared], help="Run a suite of commands")
    p.add_argument("--suite", required=True)
    p.add_argument("--store", help="SQLite file to record the reports in")
    p.add_argument("--run-id")

    p = sub.add_parser("store-list", parents=[shared], help="List stored reports")
    p.add_argument("--store")
    p.add_argument("--limit", type=int, default=20)
    return parser


# ============================================================================
# ENTRY POINT
# ============================================================================

def _required_flags(args) -> None:
    needs = {
        "graded": ["family"], "filtration": ["family"], "one-family": ["family"],
        "linear-growth": ["larger", "smaller"], "setup-growth": ["larger", "smaller"],
        "additivity": ["f", "families"], "associativity": ["families"], "minkowski": ["families"],
        "comparison": ["primary_family"], "double-limit": ["primary_families", "m"],
        "general-vol-mult": ["primary_family", "type"],
    }
    missing = [f"--{name.replace('_', '-')}" for name in needs.get(args.check, []) if not getattr(args, name)]
    if missing:
        raise UsageError(f"check {args.check} needs {', '.join(missing)}")


def execute(argv: Sequence[str], doc: WorkspaceDocument, settings: EngineSettings) -> CommandResult:
    """Parse and run one command against an already loaded workspace."""
    args = build_parser().parse_args(list(argv))
    if args.command in ("report", "store-list"):
        raise UsageError(f"'{args.command}' cannot run inside a suite")
    if args.command == "check":
        _required_flags(args)
    return COMMANDS[args.command](args, doc, settings)


def configure_logging(level: str, log_file: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT,
                        handlers=handlers, force=True)


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))


def _write_csv(path: str, result: CommandResult) -> None:
    if not result.csv_rows:
        logger.warning(f"no CSV rows for this command; {path} not written")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(result.csv_header)
        writer.writerows(result.csv_rows)
    logger.info(f"Wrote {len(result.csv_rows)} CSV row(s) to {path}")


def exit_code_for(result: CommandResult, strict: bool) -> int:
    verdicts = [r.verdict for r in result.reports]
    if result.errors or Verdict.FAIL in verdicts:
        return 1
    if strict and Verdict.EVIDENCE_ONLY in verdicts:
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = load_settings().with_overrides({"log_level": args.log_level, "workers": args.workers})
        configure_logging(settings.log_level, settings.log_file)
        if args.command == "store-list":
            store = ReportStore(args.store or settings.report_db)
            result = CommandResult({"reports": store.fetch_recent(args.limit)})
            store.close()
        else:
            if not args.workspace:
                raise UsageError(f"{args.command} needs -w/--workspace")
            doc = parse_workspace(args.workspace)
            settings = doc.engine_settings(settings).with_overrides(
                {"log_level": args.log_level, "workers": args.workers})
            logging.getLogger().setLevel(getattr(logging, settings.log_level.upper(), logging.INFO))
            if args.command == "check":
                _required_flags(args)
            result = COMMANDS[args.command](args, doc, settings)
    except GradmultError as e:
        logger.error(f"{e.kind}: {e}")
        _emit(e.to_dict())
        return e.exit_code
    _emit(result.payload)
    if args.csv:
        _write_csv(args.csv, result)
    return exit_code_for(result, args.strict)


if __name__ == "__main__":
    sys.exit(main())
