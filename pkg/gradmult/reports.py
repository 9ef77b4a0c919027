"""
reports.py - Check reports and exact-value serialization
========================================================

CheckReport is the common result of every check in the engine. Reports are
plain JSON-ready values: rationals are written as "p/q" strings (integers
as "n"), decimals only ever appear under an "approx" key.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Rational

from .monomial_core import AmbientRing, MonomialIdeal


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EVIDENCE_ONLY = "evidence-only"
    SKIPPED = "skipped"
    REFUSED = "refused"


@dataclass
class CheckReport:
    """Structured outcome of one check."""

    name: str
    instance: Dict[str, Any]
    verdict: Verdict
    mode: str = "exact"
    lhs: Any = None
    rhs: Any = None
    witnesses: List[Any] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.verdict == Verdict.FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "instance": self.instance,
            "verdict": self.verdict.value,
            "mode": self.mode,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }


def rational_str(value: Any) -> str:
    """Exact "p/q" form of an integer or rational."""
    return str(Rational(value))


def approx_str(value: Any, digits: int = 12) -> str:
    return str(Rational(value).evalf(digits))


def type_key(index: Sequence[int]) -> str:
    return ",".join(str(v) for v in index)


def ideal_to_json(I: MonomialIdeal) -> List[List[int]]:
    return [list(g) for g in I.generators]


def subset_to_json(ring: AmbientRing, subset) -> List[str]:
    return ring.subset_names(subset)


def within_tolerance(lhs: Rational, rhs: Rational, tolerance: Rational) -> bool:
    """|lhs - rhs| <= tol * max(1, |rhs|)."""
    return abs(Rational(lhs) - Rational(rhs)) <= tolerance * max(Rational(1), abs(Rational(rhs)))


def compare_values(lhs: Rational, rhs: Rational, exact: bool, tolerance: Rational) -> Tuple[bool, Verdict]:
    """Equality under the report convention: exact when possible, tolerance otherwise."""
    if exact:
        ok = Rational(lhs) == Rational(rhs)
        return ok, Verdict.PASS if ok else Verdict.FAIL
    ok = within_tolerance(lhs, rhs, tolerance)
    return ok, Verdict.EVIDENCE_ONLY if ok else Verdict.FAIL


def combine_verdicts(verdicts: Sequence[Verdict]) -> Verdict:
    if any(v == Verdict.FAIL for v in verdicts):
        return Verdict.FAIL
    if any(v == Verdict.EVIDENCE_ONLY for v in verdicts):
        return Verdict.EVIDENCE_ONLY
    return Verdict.PASS


def compare_entrywise(name: str, instance: Dict[str, Any], lhs: Dict[Tuple[int, ...], Rational],
                      rhs: Dict[Tuple[int, ...], Rational], exact: bool, tolerance: Rational,
                      mode: Optional[str] = None) -> CheckReport:
    """
    Compare two coefficient maps key by key.

    Missing keys count as zero. Every mismatching key is listed as a witness.
    """
    keys = sorted(set(lhs) | set(rhs), reverse=True)
    verdicts = []
    witnesses = []
    for key in keys:
        left = Rational(lhs.get(key, 0))
        right = Rational(rhs.get(key, 0))
        ok, verdict = compare_values(left, right, exact, tolerance)
        verdicts.append(verdict)
        if not ok:
            witnesses.append({"type": type_key(key), "lhs": rational_str(left), "rhs": rational_str(right)})
    return CheckReport(
        name=name,
        instance=instance,
        verdict=combine_verdicts(verdicts) if verdicts else Verdict.PASS,
        mode=mode or ("exact" if exact else "sequence"),
        lhs={type_key(k): rational_str(lhs.get(k, 0)) for k in keys},
        rhs={type_key(k): rational_str(rhs.get(k, 0)) for k in keys},
        witnesses=witnesses,
    )
