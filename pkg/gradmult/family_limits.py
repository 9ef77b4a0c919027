"""
family_limits.py - Limit polynomials of graded families
=======================================================

For m-primary graded families 𝕀(1..s) and M = R/Q the limit

    G(𝐦) = lim_{m→∞} λ(M / I(1)_{m m_1}⋯I(s)_{m m_s} M) / m^d

is a homogeneous polynomial of degree d whose normalized coefficients are
the family mixed multiplicities. The general version

    G(n_0, 𝐧) = lim λ(𝐉_{m𝐧} / I_{m n_0} 𝐉_{m𝐧}) / m^d

is homogeneous of degree d with no term free of t_0.

Two strategies:
- exact-noetherian: find a common period q (I_{nq} = I_q^n up to the
  horizon) and read the value off the fixed-ideal polynomial of the period
  terms divided by q^d. Values are exact rationals.
- sequence: the ratio at the horizon plus convergence diagnostics. Never a
  certified value.

This module is responsible for:
1. family_G_value / general_family_G_value estimates
2. Family mixed multiplicity tables by exact interpolation on a grid
3. Volume = multiplicity, comparison, double-limit and one-family checks
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Rational

from .errors import DimensionMismatchError, PreconditionError
from .graded_families import (
    GradedFamily,
    Powers,
    ProductFamily,
    common_period,
    linear_growth_search,
    product_of_families,
)
from .lattice_length import module_colength, relative_length
from .monomial_core import MonomialIdeal, krull_dimension, monomials_of_degree, multi_power
from .multiplicity_poly import (
    MultiplicityTable,
    check_no_pure_terms,
    evaluate_G,
    general_mixed_multiplicities,
    mixed_multiplicities,
    solve_homogeneous,
)
from .reports import (
    CheckReport,
    Verdict,
    approx_str,
    compare_entrywise,
    compare_values,
    rational_str,
    type_key,
)
from .settings import EngineSettings

logger = logging.getLogger(__name__)

EXACT = "exact-noetherian"
SEQUENCE = "sequence"


@dataclass
class LimitEstimate:
    """A limit value with the strategy that produced it."""

    value: Rational
    mode: str
    samples: List[Tuple[int, Rational]] = field(default_factory=list)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "value": rational_str(self.value),
            "mode": self.mode,
            "samples": [[m, rational_str(r)] for m, r in self.samples],
            "diagnostics": self.diagnostics,
        }
        if not self.exact:
            payload["approx"] = approx_str(self.value)
        return payload


def _sequence_diagnostics(samples: List[Tuple[int, Rational]], k: int = 5) -> Dict[str, Any]:
    ratios = [r for _, r in samples]
    changes = []
    for prev, cur in zip(ratios[-k - 1:-1], ratios[-k:]):
        changes.append(approx_str(abs(cur - prev) / abs(cur), 6) if cur != 0 else "0")
    steps = [b - a for a, b in zip(ratios, ratios[1:])]
    if all(s <= 0 for s in steps):
        monotone = "non-increasing"
    elif all(s >= 0 for s in steps):
        monotone = "non-decreasing"
    else:
        monotone = "none"
    return {"relative_changes": changes, "monotone": monotone, "horizon": samples[-1][0] if samples else 0}


def _check_families(families: Sequence[GradedFamily], Q: Optional[MonomialIdeal] = None) -> None:
    if not families:
        raise PreconditionError("need at least one family")
    ring = families[0].ring
    if any(F.ring != ring for F in families) or (Q is not None and Q.ring != ring):
        raise DimensionMismatchError("families live in different rings")


def _resolve_period(families: Sequence[GradedFamily], strategy: str, N: int,
                    settings: EngineSettings) -> Tuple[Optional[int], bool]:
    """(period or None, fell back to sequence mode)."""
    if strategy == SEQUENCE:
        return None, False
    if strategy not in ("exact", EXACT):
        raise PreconditionError(f"unknown strategy '{strategy}'")
    q = common_period(families, settings.q_max, N)
    if q is None:
        logger.warning(f"no common period <= {settings.q_max}; falling back to sequence mode")
        return None, True
    return q, False


def _family_estimate(Q: Optional[MonomialIdeal], families: Sequence[GradedFamily], point: Sequence[int],
                     degree: int, q: Optional[int], N: int, settings: EngineSettings) -> LimitEstimate:
    if q is not None:
        table = mixed_multiplicities(Q, [F.term(q) for F in families], settings, degree)
        value = evaluate_G(table, point) / Rational(q) ** degree
        return LimitEstimate(value=value, mode=EXACT, diagnostics={"period": q})
    samples = []
    for m in range(1, N + 1):
        ideal = multi_power([F.term(m * mi) for F, mi in zip(families, point)], [1] * len(families))
        samples.append((m, Rational(module_colength(Q, ideal), m ** degree)))
    return LimitEstimate(value=samples[-1][1], mode=SEQUENCE, samples=samples,
                         diagnostics=_sequence_diagnostics(samples))


def family_G_value(Q: Optional[MonomialIdeal], families: Sequence[GradedFamily], point: Sequence[int],
                   strategy: str = "exact", horizon: Optional[int] = None,
                   settings: Optional[EngineSettings] = None, degree: Optional[int] = None) -> LimitEstimate:
    """
    G(𝐦) for m-primary families on M = R/Q.

    Args:
        Q: Module ideal, or None for M = R
        families: 𝕀(1..s)
        point: 𝐦
        strategy: "exact" (period-based, falls back to sequence) or "sequence"
        horizon: Largest m sampled / period horizon
        settings: Engine settings
        degree: Normalizing degree (default d = dim R)

    Returns:
        LimitEstimate
    """
    settings = settings or EngineSettings()
    _check_families(families, Q)
    if len(point) != len(families):
        raise DimensionMismatchError(f"point {list(point)} does not match {len(families)} families")
    d = families[0].ring.dimension
    degree = d if degree is None else degree
    N = horizon or settings.horizon_for(d)
    q, fallback = _resolve_period(families, strategy, N, settings)
    estimate = _family_estimate(Q, families, point, degree, q, N, settings)
    if fallback:
        estimate.diagnostics["fallback"] = True
    return estimate


def family_mixed_multiplicities(Q: Optional[MonomialIdeal], families: Sequence[GradedFamily],
                                strategy: str = "exact", horizon: Optional[int] = None,
                                settings: Optional[EngineSettings] = None,
                                degree: Optional[int] = None) -> MultiplicityTable:
    """
    e_𝐝(M; 𝕀(1..s)) by solving for the coefficients of G on the canonical
    grid {𝐦 : |𝐦| = degree}.
    """
    settings = settings or EngineSettings()
    _check_families(families, Q)
    d = families[0].ring.dimension
    degree = d if degree is None else degree
    s = len(families)
    if Q is not None and krull_dimension(Q) < degree:
        return MultiplicityTable.zero(s, degree)
    N = horizon or settings.horizon_for(d)
    q, fallback = _resolve_period(families, strategy, N, settings)
    grid = monomials_of_degree(s, degree) if degree > 0 else [(1,) * s]
    estimates = [_family_estimate(Q, families, point, degree, q, N, settings) for point in grid]
    if degree > 0:
        coefficients = solve_homogeneous(grid, [e.value for e in estimates], degree)
    else:
        coefficients = {(0,) * s: estimates[0].value}
    table = MultiplicityTable.from_coefficients(s, degree, coefficients)
    table.exact = q is not None
    table.mode = EXACT if table.exact else SEQUENCE
    table.diagnostics = {"period": q, "horizon": N}
    if fallback:
        table.diagnostics["fallback"] = True
    negative = [type_key(t) for t, v in table.entries.items() if v < 0]
    if negative:
        logger.warning(f"negative family mixed multiplicities at types {negative}")
    return table


def volume_equals_multiplicity(Q: Optional[MonomialIdeal], families: Sequence[GradedFamily],
                               type_vector: Sequence[int], p_list: Sequence[int],
                               settings: Optional[EngineSettings] = None, strategy: str = "exact",
                               horizon: Optional[int] = None) -> CheckReport:
    """Compare e_𝐝(M; I(1)_p, ...)/p^d for p in p_list with the family value."""
    settings = settings or EngineSettings()
    _check_families(families, Q)
    d = families[0].ring.dimension
    type_vector = tuple(type_vector)
    if len(type_vector) != len(families) or sum(type_vector) != d:
        raise PreconditionError(f"type {list(type_vector)} must have {len(families)} entries summing to {d}")
    if not p_list:
        raise PreconditionError("need at least one p")
    family_table = family_mixed_multiplicities(Q, families, strategy, horizon, settings)
    limit = family_table[type_vector]
    ratios = []
    for p in p_list:
        table = mixed_multiplicities(Q, [F.term(p) for F in families], settings)
        ratios.append((p, table[type_vector] / Rational(p) ** d))
    q = family_table.diagnostics.get("period")
    exact = family_table.exact and q is not None and p_list[-1] % q == 0
    ok, verdict = compare_values(ratios[-1][1], limit, exact, settings.tolerance)
    logger.info(f"vol-mult type {list(type_vector)}: final ratio {ratios[-1][1]} vs limit {limit} -> {verdict.value}")
    return CheckReport(
        name="vol-mult",
        instance={"families": [F.describe() for F in families], "type": list(type_vector), "p": list(p_list)},
        verdict=verdict,
        mode=family_table.mode,
        lhs={"ratios": [[p, rational_str(r)] for p, r in ratios]},
        rhs={"limit": rational_str(limit)},
        witnesses=[] if ok else [{"p": ratios[-1][0], "ratio": rational_str(ratios[-1][1])}],
    )


def one_family_check(Q: Optional[MonomialIdeal], family: GradedFamily, copies: int,
                     settings: Optional[EngineSettings] = None, strategy: str = "exact",
                     horizon: Optional[int] = None) -> CheckReport:
    """Every e_𝐝 of `copies` repetitions of one family equals e_d(M; family)."""
    settings = settings or EngineSettings()
    if copies < 1:
        raise PreconditionError(f"copies must be >= 1, got {copies}")
    repeated = family_mixed_multiplicities(Q, [family] * copies, strategy, horizon, settings)
    single = family_mixed_multiplicities(Q, [family], strategy, horizon, settings)
    value = list(single.entries.values())[0]
    expected = {t: value for t in repeated.entries}
    report = compare_entrywise("one-family", {"family": family.describe(), "copies": copies},
                               repeated.entries, expected, repeated.exact and single.exact,
                               settings.tolerance)
    report.mode = repeated.mode
    return report


# ============================================================================
# GENERAL (NON m-PRIMARY) FAMILIES
# ============================================================================

def _general_estimate(I_family: GradedFamily, J_families: Sequence[GradedFamily], point: Sequence[int],
                      q: Optional[int], N: int, settings: EngineSettings) -> LimitEstimate:
    d = I_family.ring.dimension
    if q is not None:
        table = general_mixed_multiplicities(I_family.term(q), [J.term(q) for J in J_families], settings)
        value = evaluate_G(table, point) / Rational(q) ** d
        return LimitEstimate(value=value, mode=EXACT, diagnostics={"period": q})
    n0, rest = point[0], point[1:]
    samples = []
    for m in range(1, N + 1):
        J = MonomialIdeal.unit(I_family.ring)
        if J_families:
            J = multi_power([F.term(m * ni) for F, ni in zip(J_families, rest)], [1] * len(J_families))
        samples.append((m, Rational(relative_length(J, I_family.term(m * n0)), m ** d)))
    return LimitEstimate(value=samples[-1][1], mode=SEQUENCE, samples=samples,
                         diagnostics=_sequence_diagnostics(samples))


def _check_general(I_family: GradedFamily, J_families: Sequence[GradedFamily], point: Optional[Sequence[int]]) -> None:
    _check_families([I_family] + list(J_families))
    if point is not None and len(point) != len(J_families) + 1:
        raise DimensionMismatchError(f"point {list(point)} needs {len(J_families) + 1} coordinates")


def general_family_G_value(I_family: GradedFamily, J_families: Sequence[GradedFamily], point: Sequence[int],
                           strategy: str = "exact", horizon: Optional[int] = None,
                           settings: Optional[EngineSettings] = None) -> LimitEstimate:
    """G_{(𝕀;𝕁)}(n_0, 𝐧) for an m-primary 𝕀 and families 𝕁 of nonzero ideals."""
    settings = settings or EngineSettings()
    _check_general(I_family, J_families, point)
    N = horizon or settings.horizon_for(I_family.ring.dimension)
    q, fallback = _resolve_period([I_family] + list(J_families), strategy, N, settings)
    estimate = _general_estimate(I_family, J_families, point, q, N, settings)
    if fallback:
        estimate.diagnostics["fallback"] = True
    return estimate


def growth_evidence(I_family: GradedFamily, J_families: Sequence[GradedFamily], settings: EngineSettings,
                    horizon: int) -> Dict[str, Any]:
    """Linear growth of the pair ({𝐉_n}, {I_n 𝐉_n}) up to `horizon`."""
    if J_families:
        larger = product_of_families(list(J_families))
    else:
        larger = Powers(MonomialIdeal.unit(I_family.ring))
    witness = linear_growth_search(larger, ProductFamily(I_family, larger), settings.c_max, horizon)
    return {"c": witness.c if witness else None, "horizon": horizon}


def general_family_mixed_multiplicities(I_family: GradedFamily, J_families: Sequence[GradedFamily],
                                        strategy: str = "exact", horizon: Optional[int] = None,
                                        settings: Optional[EngineSettings] = None,
                                        record_growth: bool = False) -> MultiplicityTable:
    """
    e_{(d_0, 𝐝)}(𝕀 | 𝕁) read off the coefficients of t_0^{d_0+1} 𝐭^𝐝 in G.

    Raises:
        StructuralCheckError: G has a nonzero term free of t_0
    """
    settings = settings or EngineSettings()
    _check_general(I_family, J_families, None)
    d = I_family.ring.dimension
    arity = len(J_families) + 1
    N = horizon or settings.horizon_for(d)
    q, fallback = _resolve_period([I_family] + list(J_families), strategy, N, settings)
    grid = monomials_of_degree(arity, d)
    values = [_general_estimate(I_family, J_families, point, q, N, settings).value for point in grid]
    coefficients = solve_homogeneous(grid, values, d)
    check_no_pure_terms(coefficients)
    shifted = {(t[0] - 1,) + t[1:]: c for t, c in coefficients.items() if t[0] > 0}
    table = MultiplicityTable.from_coefficients(arity, d - 1, shifted, general=True)
    # from_coefficients multiplies by d_0!; the t_0 exponent is d_0 + 1.
    table.entries = {t: v * (t[0] + 1) for t, v in table.entries.items()}
    table.exact = q is not None
    table.mode = EXACT if table.exact else SEQUENCE
    table.diagnostics = {"period": q, "horizon": N}
    if fallback:
        table.diagnostics["fallback"] = True
    if record_growth:
        table.diagnostics["linear_growth"] = growth_evidence(I_family, J_families, settings, min(N, 6))
    return table


def general_volume_equals_multiplicity(I_family: GradedFamily, J_families: Sequence[GradedFamily],
                                       type_vector: Sequence[int], p_list: Sequence[int],
                                       settings: Optional[EngineSettings] = None, strategy: str = "exact",
                                       horizon: Optional[int] = None) -> CheckReport:
    """Compare e_{(d_0,𝐝)}(I_p | J(1)_p, ...)/p^d with the family value."""
    settings = settings or EngineSettings()
    _check_general(I_family, J_families, None)
    d = I_family.ring.dimension
    type_vector = tuple(type_vector)
    if len(type_vector) != len(J_families) + 1 or sum(type_vector) != d - 1:
        raise PreconditionError(f"type {list(type_vector)} must have {len(J_families) + 1} entries summing to {d - 1}")
    if not p_list:
        raise PreconditionError("need at least one p")
    family_table = general_family_mixed_multiplicities(I_family, J_families, strategy, horizon, settings)
    limit = family_table[type_vector]
    ratios = []
    for p in p_list:
        table = general_mixed_multiplicities(I_family.term(p), [J.term(p) for J in J_families], settings)
        ratios.append((p, table[type_vector] / Rational(p) ** d))
    q = family_table.diagnostics.get("period")
    exact = family_table.exact and q is not None and p_list[-1] % q == 0
    ok, verdict = compare_values(ratios[-1][1], limit, exact, settings.tolerance)
    return CheckReport(
        name="general-vol-mult",
        instance={"primary": I_family.describe(), "families": [J.describe() for J in J_families],
                  "type": list(type_vector), "p": list(p_list)},
        verdict=verdict,
        mode=family_table.mode,
        lhs={"ratios": [[p, rational_str(r)] for p, r in ratios]},
        rhs={"limit": rational_str(limit)},
        witnesses=[] if ok else [{"p": ratios[-1][0], "ratio": rational_str(ratios[-1][1])}],
    )


def comparison_check(I_family: GradedFamily, J_families: Sequence[GradedFamily],
                     strategy: str = "exact", horizon: Optional[int] = None,
                     settings: Optional[EngineSettings] = None) -> CheckReport:
    """
    For m-primary families:
        e_{(0,𝐝)}(𝕀, 𝕁) = e_𝐝(𝕁)
        e_{(d_0,𝐝)}(𝕀, 𝕁) = e_{(d_0-1,𝐝)}(𝕀 | 𝕁) for d_0 > 0
    """
    settings = settings or EngineSettings()
    _check_general(I_family, J_families, None)
    lhs = family_mixed_multiplicities(None, [I_family] + list(J_families), strategy, horizon, settings)
    general = general_family_mixed_multiplicities(I_family, J_families, strategy, horizon, settings)
    only_j = family_mixed_multiplicities(None, J_families, strategy, horizon, settings) if J_families else None
    rhs = {}
    for t in lhs.entries:
        if t[0] == 0:
            rhs[t] = only_j[t[1:]]
        else:
            rhs[t] = general[(t[0] - 1,) + t[1:]]
    exact = lhs.exact and general.exact and (only_j is None or only_j.exact)
    report = compare_entrywise(
        "comparison",
        {"primary": I_family.describe(), "families": [J.describe() for J in J_families]},
        lhs.entries, rhs, exact, settings.tolerance,
    )
    report.mode = EXACT if exact else SEQUENCE
    return report


def double_limit_check(I_families: Sequence[GradedFamily], J_families: Sequence[GradedFamily],
                       m_point: Sequence[int], n_point: Sequence[int], p_list: Sequence[int],
                       m_list: Sequence[int], settings: Optional[EngineSettings] = None,
                       horizon: Optional[int] = None) -> CheckReport:
    """
    Convergence table of λ(𝐉(p)^{m𝐧} / 𝐈(p)^{m𝐦} 𝐉(p)^{m𝐧}) / (p^d m^d)
    against the single limit lim_m λ(𝐉_{m𝐧} / 𝐈_{m𝐦} 𝐉_{m𝐧}) / m^d.
    """
    settings = settings or EngineSettings()
    _check_families(list(I_families) + list(J_families))
    if len(m_point) != len(I_families) or len(n_point) != len(J_families):
        raise DimensionMismatchError("points do not match the number of families")
    if not p_list or not m_list:
        raise PreconditionError("need at least one p and one m")
    ring = I_families[0].ring
    d = ring.dimension
    N = horizon or settings.horizon_for(d)

    def pair(p: int, m: int) -> Tuple[MonomialIdeal, MonomialIdeal]:
        I = multi_power([F.term(p) for F in I_families], [m * mi for mi in m_point])
        J = MonomialIdeal.unit(ring)
        if J_families:
            J = multi_power([F.term(p) for F in J_families], [m * ni for ni in n_point])
        return I, J

    q = common_period(list(I_families) + list(J_families), settings.q_max, N)
    if q is not None:
        I_q, J_q = pair(q, 1)
        table = general_mixed_multiplicities(I_q, [J_q], settings)
        limit = evaluate_G(table, (1, 1)) / Rational(q) ** d
        mode = EXACT
    else:
        I_seq = multi_power([F.term(N * mi) for F, mi in zip(I_families, m_point)], [1] * len(I_families))
        J_seq = MonomialIdeal.unit(ring)
        if J_families:
            J_seq = multi_power([F.term(N * ni) for F, ni in zip(J_families, n_point)], [1] * len(J_families))
        limit = Rational(relative_length(J_seq, I_seq), N ** d)
        mode = SEQUENCE
    cells = []
    for p in p_list:
        for m in m_list:
            I, J = pair(p, m)
            cells.append((p, m, Rational(relative_length(J, I), (p * m) ** d)))
    final = cells[-1][2]
    if final == limit:
        verdict = Verdict.PASS
    else:
        ok, _ = compare_values(final, limit, False, settings.tolerance)
        verdict = Verdict.EVIDENCE_ONLY if ok else Verdict.FAIL
    logger.info(f"double limit: final cell {approx_str(final, 8)} vs limit {limit} -> {verdict.value}")
    return CheckReport(
        name="double-limit",
        instance={"primary": [F.describe() for F in I_families], "families": [F.describe() for F in J_families],
                  "m": list(m_point), "n": list(n_point), "p": list(p_list), "m_list": list(m_list)},
        verdict=verdict,
        mode=mode,
        lhs={"table": [[p, m, rational_str(v), approx_str(v)] for p, m, v in cells]},
        rhs={"limit": rational_str(limit), "approx": approx_str(limit)},
        witnesses=[] if verdict != Verdict.FAIL else [{"p": cells[-1][0], "m": cells[-1][1]}],
        notes=[f"period {q}" if q is not None else f"sequence limit at horizon {N}"],
    )
