"""
suite_runner.py - Batch runner for check suites
===============================================

Runs a list of CLI commands against one workspace and aggregates their
CheckReports:

    {"items": [
        {"name": "minkowski m/(x2,y3)", "argv": ["check", "minkowski", "--families", "M,F"]},
        ["family-mixed", "--families", "S"]
    ]}

Items are independent; with workers > 1 they run on a thread pool, and the
aggregated output always follows the input order.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from .errors import GradmultError, WorkspaceError
from .report_store import ReportStore
from .reports import CheckReport, Verdict

logger = logging.getLogger(__name__)


@dataclass
class SuiteItem:
    name: str
    argv: List[str]


@dataclass
class ItemOutcome:
    """Result of one suite item: its reports, or the error that stopped it."""

    item: SuiteItem
    reports: List[CheckReport] = field(default_factory=list)
    result: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        if any(r.verdict == Verdict.FAIL for r in self.reports):
            return Verdict.FAIL.value
        if any(r.verdict == Verdict.EVIDENCE_ONLY for r in self.reports):
            return Verdict.EVIDENCE_ONLY.value
        if self.reports and all(r.verdict in (Verdict.SKIPPED, Verdict.REFUSED) for r in self.reports):
            return self.reports[0].verdict.value
        return Verdict.PASS.value

    def to_dict(self) -> Dict[str, Any]:
        payload = {"name": self.item.name, "argv": self.item.argv, "status": self.status,
                   "reports": [r.to_dict() for r in self.reports]}
        if self.result is not None and not self.reports:
            payload["result"] = self.result
        if self.error is not None:
            payload["error"] = self.error
        return payload


@dataclass
class SuiteResult:
    outcomes: List[ItemOutcome]

    @property
    def reports(self) -> List[CheckReport]:
        return [r for o in self.outcomes for r in o.reports]

    @property
    def errors(self) -> int:
        return sum(1 for o in self.outcomes if o.error is not None)

    def summary(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for outcome in self.outcomes:
            counts[outcome.status] = counts.get(outcome.status, 0) + 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {"items": [o.to_dict() for o in self.outcomes], "summary": self.summary()}


def load_suite(path: str) -> List[SuiteItem]:
    """
    Read a suite file.

    Raises:
        WorkspaceError: unreadable file or malformed item
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as e:
        raise WorkspaceError(f"cannot read suite {path}: {e}")
    except json.JSONDecodeError as e:
        raise WorkspaceError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    raw = data.get("items") if isinstance(data, dict) else data
    if not isinstance(raw, list):
        raise WorkspaceError("suite needs an 'items' list", "$.items")
    items = []
    for i, entry in enumerate(raw):
        path_i = f"$.items[{i}]"
        if isinstance(entry, dict):
            argv, name = entry.get("argv"), entry.get("name")
        else:
            argv, name = entry, None
        if not isinstance(argv, list) or not argv or not all(isinstance(a, str) for a in argv):
            raise WorkspaceError("item needs a non-empty list of string arguments", path_i)
        if argv[0] in ("report", "store-list"):
            raise WorkspaceError(f"'{argv[0]}' cannot be nested in a suite", path_i)
        items.append(SuiteItem(name=name or " ".join(argv), argv=argv))
    return items


def _run_item(item: SuiteItem, execute: Callable[[List[str]], Any]) -> ItemOutcome:
    try:
        outcome = execute(item.argv)
        return ItemOutcome(item=item, reports=list(outcome.reports), result=outcome.payload)
    except GradmultError as e:
        logger.error(f"Item '{item.name}' failed: {e}")
        return ItemOutcome(item=item, error=e.to_dict())


def run_suite(items: List[SuiteItem], execute: Callable[[List[str]], Any], workers: int = 1,
              store: Optional[ReportStore] = None, run_id: Optional[str] = None) -> SuiteResult:
    """
    Run every item and aggregate the outcomes in input order.

    Args:
        items: Suite items
        execute: Runs one argv and returns an object with `payload` and `reports`
        workers: Thread count (1 runs inline)
        store: Optional report store; every report is saved under `run_id`
        run_id: Identifier for stored reports (default: start timestamp)

    Returns:
        SuiteResult with the outcomes in input order
    """
    start_time = datetime.now()
    run_id = run_id or f"run-{start_time.strftime('%Y%m%d-%H%M%S')}"
    logger.info("=" * 70)
    logger.info(" " * 20 + "GRADMULT CHECK SUITE")
    logger.info(" " * 20 + f"Run started: {start_time.strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info("=" * 70)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda item: _run_item(item, execute), items))
    else:
        outcomes = []
        for index, item in enumerate(items, 1):
            logger.info(f"ITEM {index}/{len(items)}: {item.name}")
            outcomes.append(_run_item(item, execute))

    if store is not None:
        for outcome in outcomes:
            for report in outcome.reports:
                store.save_report(report, run_id=run_id)
        logger.info(f"Stored reports under run id {run_id}")

    duration = datetime.now() - start_time
    logger.info("")
    logger.info("=" * 70)
    logger.info(" " * 20 + "SUITE SUMMARY")
    logger.info("=" * 70)
    for outcome in outcomes:
        logger.info(f"  {outcome.item.name}: {outcome.status.upper()}")
    logger.info("")
    logger.info(f"  Duration: {duration}")
    logger.info("=" * 70)

    return SuiteResult(outcomes)
