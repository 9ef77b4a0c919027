"""
theorem_suite.py - Executable structural checks
===============================================

Each check computes both sides of a structural identity or inequality for a
concrete monomial instance and returns a CheckReport.

This module is responsible for:
1. The nilradical hypothesis dim N(R/Q) < dim R/Q
2. Additivity along 0 -> R/(Q:f) -> R/Q -> R/(Q+(f)) -> 0
3. Associativity over the top-dimensional minimal primes of Q
4. Minkowski inequalities for two families

Exact-mode passes are exact rational identities or inequalities;
sequence-mode passes are evidence-only.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Rational, integer_nthroot

from .errors import PreconditionError
from .family_limits import EXACT, SEQUENCE, family_mixed_multiplicities
from .graded_families import GradedFamily, ProductFamily, Restricted, common_period
from .lattice_length import localized_length
from .monomial_core import (
    MonomialIdeal,
    colon,
    ideal_sum,
    krull_dimension,
    minimal_primes,
    normalize,
    radical,
)
from .multiplicity_poly import MultiplicityTable
from .reports import (
    CheckReport,
    Verdict,
    compare_entrywise,
    ideal_to_json,
    rational_str,
    subset_to_json,
    within_tolerance,
)
from .settings import EngineSettings

logger = logging.getLogger(__name__)


def nilradical_hypothesis(Q: MonomialIdeal) -> CheckReport:
    """
    dim N < dim R/Q for the nilradical N = rad(Q)/Q of R/Q, where
    dim N = dim R/(Q : rad(Q)).

    Raises:
        PreconditionError: Q is the unit ideal
    """
    if Q.is_unit:
        raise PreconditionError("nilradical hypothesis needs a proper ideal")
    instance = {"module": ideal_to_json(Q)}
    if Q.is_zero:
        return CheckReport("nilradical", instance, Verdict.PASS, notes=["R is a domain"])
    d_bar = krull_dimension(Q)
    rad = radical(Q)
    if rad == Q:
        return CheckReport("nilradical", instance, Verdict.PASS, lhs={"dim_nilradical": None},
                           rhs={"dim": d_bar}, notes=["Q is radical, the nilradical is zero"])
    dim_n = krull_dimension(colon(Q, rad))
    verdict = Verdict.PASS if dim_n < d_bar else Verdict.FAIL
    logger.info(f"nilradical hypothesis for {Q}: dim N = {dim_n}, dim R/Q = {d_bar} -> {verdict.value}")
    return CheckReport(
        name="nilradical",
        instance=instance,
        verdict=verdict,
        lhs={"dim_nilradical": dim_n},
        rhs={"dim": d_bar},
        witnesses=[] if verdict == Verdict.PASS else [{"annihilator": ideal_to_json(colon(Q, rad))}],
    )


def _module_table(Q: MonomialIdeal, families: Sequence[GradedFamily], degree: int, strategy: str,
                  horizon: Optional[int], settings: EngineSettings) -> MultiplicityTable:
    if Q.is_unit:
        return MultiplicityTable.zero(len(families), degree)
    return family_mixed_multiplicities(Q, families, strategy, horizon, settings, degree)


def additivity_check(Q: Optional[MonomialIdeal], f: Sequence[int], families: Sequence[GradedFamily],
                     settings: Optional[EngineSettings] = None, strategy: str = "exact",
                     horizon: Optional[int] = None, degree: Optional[int] = None) -> CheckReport:
    """
    e_𝐝(R/Q) = e_𝐝(R/(Q:f)) + e_𝐝(R/(Q+(f))) for every type 𝐝.

    Args:
        Q: Module ideal (None for the zero ideal)
        f: Exponent of the monomial f
        families: m-primary families
        degree: Extraction degree (default dim R/Q)
    """
    settings = settings or EngineSettings()
    if not families:
        raise PreconditionError("need at least one family")
    ring = families[0].ring
    Q = Q if Q is not None else MonomialIdeal.zero(ring)
    if Q.is_unit:
        raise PreconditionError("additivity needs a proper module ideal")
    fm = normalize(ring, [f])
    sub = colon(Q, fm)
    quotient = ideal_sum(Q, fm)
    degree = krull_dimension(Q) if degree is None else degree
    whole = _module_table(Q, families, degree, strategy, horizon, settings)
    left = _module_table(sub, families, degree, strategy, horizon, settings)
    right = _module_table(quotient, families, degree, strategy, horizon, settings)
    rhs = {t: left.entries[t] + right.entries[t] for t in whole.entries}
    exact = whole.exact and left.exact and right.exact
    report = compare_entrywise(
        "additivity",
        {"module": ideal_to_json(Q), "f": list(f), "families": [F.describe() for F in families],
         "degree": degree, "sub": ideal_to_json(sub), "quotient": ideal_to_json(quotient)},
        whole.entries, rhs, exact, settings.tolerance,
    )
    report.mode = EXACT if exact else SEQUENCE
    logger.info(f"additivity for {Q} and f={list(f)}: {report.verdict.value}")
    return report


def associativity_check(Q: Optional[MonomialIdeal], families: Sequence[GradedFamily],
                        settings: Optional[EngineSettings] = None, strategy: str = "exact",
                        horizon: Optional[int] = None) -> CheckReport:
    """
    e_𝐝(R/Q) = Σ_P λ((R/Q)_P) · e_𝐝(R/P) over the minimal primes P of Q
    with dim R/P = dim R/Q, the families pushed into R/P.

    The check is skipped when dim R/Q = 0. When the nilradical hypothesis
    fails it is refused unless every family is Noetherian (then the family
    values are fixed-ideal values and the formula holds regardless).
    """
    settings = settings or EngineSettings()
    if not families:
        raise PreconditionError("need at least one family")
    ring = families[0].ring
    d = ring.dimension
    Q = Q if Q is not None else MonomialIdeal.zero(ring)
    if Q.is_unit:
        raise PreconditionError("associativity needs a proper module ideal")
    instance = {"module": ideal_to_json(Q), "families": [F.describe() for F in families]}
    d_bar = krull_dimension(Q)
    if d_bar == 0:
        return CheckReport("associativity", instance, Verdict.SKIPPED, notes=["degenerate: dim R/Q = 0"])
    hypothesis = nilradical_hypothesis(Q)
    notes = []
    if hypothesis.failed:
        N = horizon or settings.horizon_for(d)
        if strategy == SEQUENCE or common_period(families, settings.q_max, N) is None:
            return CheckReport("associativity", instance, Verdict.REFUSED,
                               witnesses=[hypothesis.to_dict()],
                               notes=["nilradical hypothesis fails"])
        notes.append("nilradical hypothesis fails; families are Noetherian, check run on period terms")

    lhs = family_mixed_multiplicities(Q, families, strategy, horizon, settings, degree=d_bar)
    if Q.is_zero:
        top = [(frozenset(), 1)]
    else:
        top = [(P, localized_length(Q, P)) for P in minimal_primes(Q) if d - len(P) == d_bar]
    rhs = {t: Rational(0) for t in lhs.entries}
    exact = lhs.exact
    for prime, length in top:
        restricted = [Restricted(F, prime) for F in families]
        table = family_mixed_multiplicities(None, restricted, strategy, horizon, settings)
        exact = exact and table.exact
        for t in rhs:
            rhs[t] += length * table.entries[t]
        entries = {",".join(map(str, t)): rational_str(v) for t, v in sorted(table.entries.items(), reverse=True)}
        notes.append(f"prime {subset_to_json(ring, prime)}: length {length}, table {entries}")
    report = compare_entrywise("associativity", instance, lhs.entries, rhs, exact, settings.tolerance)
    report.mode = EXACT if exact else SEQUENCE
    report.notes = notes
    logger.info(f"associativity for {Q}: {report.verdict.value}")
    return report


# ============================================================================
# MINKOWSKI INEQUALITIES
# ============================================================================

def _rational_root(value: Rational, degree: int) -> Optional[Rational]:
    value = Rational(value)
    if value < 0:
        return None
    p, exact_p = integer_nthroot(int(value.p), degree)
    q, exact_q = integer_nthroot(int(value.q), degree)
    return Rational(p, q) if exact_p and exact_q else None


def _root_bracket(value: Rational, degree: int, digits: int) -> Tuple[Rational, Rational]:
    """lo <= value^{1/degree} <= hi with hi - lo = 10^-digits."""
    scale = 10 ** digits
    scaled = Rational(value) * scale ** degree
    floor_value = int(scaled.p // scaled.q)
    root, _ = integer_nthroot(floor_value, degree)
    return Rational(root, scale), Rational(root + 1, scale)


def _root_sum_inequality(e12: Rational, e1: Rational, e2: Rational, degree: int,
                         digits: int, rounds: int) -> Tuple[Optional[bool], str]:
    """
    Decide e12^{1/D} <= e1^{1/D} + e2^{1/D}.

    Returns:
        (holds or None when undecided, how it was decided)
    """
    if degree == 1:
        return e12 <= e1 + e2, "exact"
    if e1 == 0 or e2 == 0:
        return e12 <= e1 + e2, "exact"
    ratio = _rational_root(e2 / e1, degree)
    if ratio is not None:
        return e12 <= e1 * (1 + ratio) ** degree, "exact"
    ratio = _rational_root(e1 / e2, degree)
    if ratio is not None:
        return e12 <= e2 * (1 + ratio) ** degree, "exact"
    for step in range(rounds):
        width = digits * (step + 1)
        lo12, hi12 = _root_bracket(e12, degree, width)
        lo1, hi1 = _root_bracket(e1, degree, width)
        lo2, hi2 = _root_bracket(e2, degree, width)
        if hi12 <= lo1 + lo2:
            return True, "certified bracket"
        if lo12 > hi1 + hi2:
            return False, "certified bracket"
    return None, "undecided bracket"


def minkowski_inequalities(E: Dict[int, Rational], e1: Rational, e2: Rational, e12: Rational, degree: int,
                           exact: bool, tolerance: Rational, digits: int = 9,
                           rounds: int = 5) -> Tuple[Verdict, List[Dict[str, Any]]]:
    """
    Evaluate the four Minkowski inequalities with E(i) = e_{(i, D-i)}.

    (i)   E(i)^2 <= E(i+1)·E(i-1)          1 <= i <= D-1
    (ii)  E(i)·E(D-i) <= e1·e2             0 <= i <= D
    (iii) E(i)^D <= e1^i·e2^{D-i}          0 <= i <= D
    (iv)  e12^{1/D} <= e1^{1/D} + e2^{1/D}
    """
    items: List[Dict[str, Any]] = []

    def record(item: str, index: Optional[int], lhs: Rational, rhs: Rational) -> None:
        holds = lhs <= rhs if exact else lhs <= rhs or within_tolerance(lhs, rhs, tolerance)
        items.append({"item": item, "index": index, "lhs": rational_str(lhs), "rhs": rational_str(rhs),
                      "holds": bool(holds), "how": "exact" if exact else "tolerance"})

    D = degree
    for i in range(1, D):
        record("i", i, E[i] ** 2, E[i + 1] * E[i - 1])
    for i in range(D + 1):
        record("ii", i, E[i] * E[D - i], e1 * e2)
    for i in range(D + 1):
        record("iii", i, E[i] ** D, e1 ** i * e2 ** (D - i))

    holds, how = _root_sum_inequality(Rational(e12), Rational(e1), Rational(e2), D, digits, rounds)
    if not exact and holds is False:
        lo12, _ = _root_bracket(e12, D, digits)
        _, hi1 = _root_bracket(e1, D, digits)
        _, hi2 = _root_bracket(e2, D, digits)
        holds = within_tolerance(lo12, hi1 + hi2, tolerance)
        how = "tolerance"
    items.append({"item": "iv", "index": None, "lhs": rational_str(e12), "rhs": f"({rational_str(e1)})^(1/{D}) + ({rational_str(e2)})^(1/{D})",
                  "holds": holds, "how": how})

    if any(item["holds"] is False for item in items):
        verdict = Verdict.FAIL
    elif not exact or any(item["holds"] is None for item in items):
        verdict = Verdict.EVIDENCE_ONLY
    else:
        verdict = Verdict.PASS
    return verdict, items


def minkowski_check(first: GradedFamily, second: GradedFamily, Q: Optional[MonomialIdeal] = None,
                    settings: Optional[EngineSettings] = None, strategy: str = "exact",
                    horizon: Optional[int] = None) -> CheckReport:
    """Minkowski inequalities (i)-(iv) for two m-primary families on M = R/Q."""
    settings = settings or EngineSettings()
    D = first.ring.dimension if Q is None else krull_dimension(Q)
    if D < 1:
        raise PreconditionError("Minkowski inequalities need positive dimension")
    table = family_mixed_multiplicities(Q, [first, second], strategy, horizon, settings, degree=D)
    single1 = family_mixed_multiplicities(Q, [first], strategy, horizon, settings, degree=D)
    single2 = family_mixed_multiplicities(Q, [second], strategy, horizon, settings, degree=D)
    joint = family_mixed_multiplicities(Q, [ProductFamily(first, second)], strategy, horizon, settings, degree=D)
    exact = table.exact and single1.exact and single2.exact and joint.exact
    E = {i: table[(i, D - i)] for i in range(D + 1)}
    e1, e2, e12 = single1[(D,)], single2[(D,)], joint[(D,)]
    verdict, items = minkowski_inequalities(E, e1, e2, e12, D, exact, settings.tolerance,
                                            settings.bracket_digits, settings.bracket_rounds)
    notes = []
    if verdict == Verdict.PASS and any(item["how"] == "certified bracket" for item in items):
        notes.append("pass (certified bracket)")
    logger.info(f"minkowski ({first.label()}, {second.label()}): {verdict.value}")
    return CheckReport(
        name="minkowski",
        instance={"families": [first.describe(), second.describe()],
                  "module": ideal_to_json(Q) if Q is not None else None, "degree": D},
        verdict=verdict,
        mode=EXACT if exact else SEQUENCE,
        lhs={"table": {f"{i},{D - i}": rational_str(v) for i, v in E.items()}},
        rhs={"e1": rational_str(e1), "e2": rational_str(e2), "e12": rational_str(e12)},
        witnesses=[item for item in items if item["holds"] is False],
        notes=notes + [f"{item['item']}[{item['index']}]: {item['lhs']} <= {item['rhs']} ({item['how']})"
                       for item in items],
    )
