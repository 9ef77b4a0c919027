"""
graded_families.py - Graded families of monomial ideals
=======================================================

A graded family is a sequence n ↦ I_n with I_0 = R and I_n·I_m ⊆ I_{n+m}.
Families here are lazily evaluated and memoized; every construction is a
small GradedFamily subclass.

This module is responsible for:
1. The family constructions (powers, truncations, saturations, symbolic
   powers, integral closures, products, tables, scaled and restricted)
2. Horizon-bounded checks of the graded-family and filtration axioms
3. Linear-growth search for pairs of families
4. Detecting a Noetherian period q with I_{nq} = I_q^n

Checks that quantify over all n are only verified up to a horizon N and
their reports are stamped as evidence at that horizon.
"""

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .errors import DimensionMismatchError, NotSquarefreeError, PreconditionError
from .monomial_core import (
    AmbientRing,
    MonomialIdeal,
    ideal_sum,
    intersect,
    is_m_primary,
    is_squarefree,
    is_subideal,
    kill_variables,
    maximal_ideal,
    minimal_primes,
    power,
    prime_ideal,
    product,
    saturate,
)
from .reports import CheckReport, Verdict, ideal_to_json, subset_to_json
from . import newton_geometry

logger = logging.getLogger(__name__)


class GradedFamily(ABC):
    """
    Base class for graded families.

    Subclasses implement `_compute(n)` for n >= 1; `term` adds the memo and
    the I_0 = R convention. The memo may be filled concurrently: a value
    computed twice is the same ideal, so the first stored one wins.
    """

    kind = "family"

    def __init__(self, ring: AmbientRing, name: Optional[str] = None):
        self.ring = ring
        self.name = name
        self._memo: Dict[int, MonomialIdeal] = {0: MonomialIdeal.unit(ring)}
        self._lock = threading.Lock()

    def term(self, n: int) -> MonomialIdeal:
        if n < 0:
            raise PreconditionError(f"family index must be >= 0, got {n}")
        with self._lock:
            cached = self._memo.get(n)
        if cached is not None:
            return cached
        value = self._compute(n)
        with self._lock:
            return self._memo.setdefault(n, value)

    @abstractmethod
    def _compute(self, n: int) -> MonomialIdeal:
        ...

    @abstractmethod
    def _fields(self) -> Dict[str, Any]:
        ...

    def describe(self) -> Dict[str, Any]:
        payload = {"kind": self.kind}
        if self.name:
            payload["name"] = self.name
        payload.update(self._fields())
        return payload

    def label(self) -> str:
        return self.name or self.kind

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label()}>"


def _describe_ideal(I: MonomialIdeal) -> List[List[int]]:
    return ideal_to_json(I)


def _noetherian_extension(prefix_term, a: int, n: int, ring: AmbientRing, later_term) -> MonomialIdeal:
    """
    Ideal generated by all products of prefix terms whose indices sum to n,
    using only parts 1..a. Any such product splits off a first factor i <= a,
    so J_n = Σ_{i=1}^{a} J_i · J_{n-i}.
    """
    result = MonomialIdeal.zero(ring)
    for i in range(1, min(a, n) + 1):
        result = ideal_sum(result, product(prefix_term(i), later_term(n - i)))
    return result


class Powers(GradedFamily):
    kind = "powers"

    def __init__(self, ideal: MonomialIdeal, name: Optional[str] = None):
        super().__init__(ideal.ring, name)
        self.ideal = ideal

    def _compute(self, n: int) -> MonomialIdeal:
        return power(self.ideal, n)

    def _fields(self) -> Dict[str, Any]:
        return {"ideal": _describe_ideal(self.ideal)}


class Truncated(GradedFamily):
    """The Noetherian family generated by the first `a` terms of `base`."""

    kind = "truncated"

    def __init__(self, a: int, base: GradedFamily, name: Optional[str] = None):
        if a < 1:
            raise PreconditionError(f"truncation level must be >= 1, got {a}")
        super().__init__(base.ring, name)
        self.a = a
        self.base = base

    def _compute(self, n: int) -> MonomialIdeal:
        if n <= self.a:
            return self.base.term(n)
        return _noetherian_extension(self.base.term, self.a, n, self.ring, self.term)

    def _fields(self) -> Dict[str, Any]:
        return {"a": self.a, "base": self.base.describe()}


class Saturation(GradedFamily):
    kind = "saturation"

    def __init__(self, base: GradedFamily, name: Optional[str] = None):
        super().__init__(base.ring, name)
        self.base = base

    def _compute(self, n: int) -> MonomialIdeal:
        return saturate(self.base.term(n))

    def _fields(self) -> Dict[str, Any]:
        return {"base": self.base.describe()}


class SymbolicPowers(GradedFamily):
    """Q^(n) = ∩ P^n over the minimal primes P of a squarefree Q."""

    kind = "symbolic"

    def __init__(self, ideal: MonomialIdeal, name: Optional[str] = None):
        if not is_squarefree(ideal):
            raise NotSquarefreeError(f"symbolic powers need a squarefree ideal, got {ideal}")
        super().__init__(ideal.ring, name)
        self.ideal = ideal
        self.primes = [prime_ideal(ideal.ring, P) for P in minimal_primes(ideal)]

    def _compute(self, n: int) -> MonomialIdeal:
        result = power(self.primes[0], n)
        for P in self.primes[1:]:
            result = intersect(result, power(P, n))
        return result

    def _fields(self) -> Dict[str, Any]:
        return {"ideal": _describe_ideal(self.ideal)}


class IntegralClosurePowers(GradedFamily):
    kind = "integral-closure"

    def __init__(self, ideal: MonomialIdeal, name: Optional[str] = None):
        if ideal.is_zero:
            raise PreconditionError("integral closure of the zero ideal")
        super().__init__(ideal.ring, name)
        self.ideal = ideal

    def _compute(self, n: int) -> MonomialIdeal:
        return newton_geometry.integral_closure_power(self.ideal, n)

    def _fields(self) -> Dict[str, Any]:
        return {"ideal": _describe_ideal(self.ideal)}


class ProductFamily(GradedFamily):
    """{I_n J_n}."""

    kind = "product"

    def __init__(self, left: GradedFamily, right: GradedFamily, name: Optional[str] = None):
        if left.ring != right.ring:
            raise DimensionMismatchError("product of families over different rings")
        super().__init__(left.ring, name)
        self.left = left
        self.right = right

    def _compute(self, n: int) -> MonomialIdeal:
        return product(self.left.term(n), self.right.term(n))

    def _fields(self) -> Dict[str, Any]:
        return {"left": self.left.describe(), "right": self.right.describe()}


class TableFamily(GradedFamily):
    """Explicit terms t_1..t_k, extended past k by products of earlier terms."""

    kind = "table"

    def __init__(self, terms: Sequence[MonomialIdeal], name: Optional[str] = None):
        if not terms:
            raise PreconditionError("table family needs at least one term")
        ring = terms[0].ring
        if any(t.ring != ring for t in terms):
            raise DimensionMismatchError("table terms live in different rings")
        super().__init__(ring, name)
        self.terms = list(terms)

    def _compute(self, n: int) -> MonomialIdeal:
        k = len(self.terms)
        if n <= k:
            return self.terms[n - 1]
        return _noetherian_extension(lambda i: self.terms[i - 1], k, n, self.ring, self.term)

    def _fields(self) -> Dict[str, Any]:
        return {"terms": [_describe_ideal(t) for t in self.terms]}


class Scaled(GradedFamily):
    """I_n = I^{⌈n/α⌉}."""

    kind = "scaled"

    def __init__(self, ideal: MonomialIdeal, alpha: int, name: Optional[str] = None):
        if alpha < 1:
            raise PreconditionError(f"scale must be a positive integer, got {alpha}")
        super().__init__(ideal.ring, name)
        self.ideal = ideal
        self.alpha = alpha

    def _compute(self, n: int) -> MonomialIdeal:
        return power(self.ideal, -(-n // self.alpha))

    def _fields(self) -> Dict[str, Any]:
        return {"ideal": _describe_ideal(self.ideal), "alpha": self.alpha}


class Restricted(GradedFamily):
    """Images of the terms of `base` in R/(x_i : i in subset)."""

    kind = "restricted"

    def __init__(self, base: GradedFamily, subset: Iterable[int], name: Optional[str] = None):
        self.subset = frozenset(subset)
        keep = [i for i in range(base.ring.dimension) if i not in self.subset]
        if not keep:
            raise PreconditionError("cannot restrict away every variable")
        super().__init__(AmbientRing(tuple(base.ring.variables[i] for i in keep)), name)
        self.base = base

    def _compute(self, n: int) -> MonomialIdeal:
        return kill_variables(self.base.term(n), self.subset)

    def _fields(self) -> Dict[str, Any]:
        return {"base": self.base.describe(), "kill": subset_to_json(self.base.ring, self.subset)}


class Veronese(GradedFamily):
    """I_n = F_{kn}."""

    kind = "veronese"

    def __init__(self, base: GradedFamily, k: int, name: Optional[str] = None):
        if k < 1:
            raise PreconditionError(f"veronese step must be >= 1, got {k}")
        super().__init__(base.ring, name)
        self.base = base
        self.k = k

    def _compute(self, n: int) -> MonomialIdeal:
        return self.base.term(self.k * n)

    def _fields(self) -> Dict[str, Any]:
        return {"base": self.base.describe(), "k": self.k}


def product_of_families(families: Sequence[GradedFamily]) -> GradedFamily:
    result = families[0]
    for family in families[1:]:
        result = ProductFamily(result, family)
    return result


# ============================================================================
# AXIOM CHECKS
# ============================================================================

def verify_graded(F: GradedFamily, N: int) -> CheckReport:
    """Check I_n·I_m ⊆ I_{n+m} for all n, m >= 1 with n + m <= N."""
    if N < 1:
        raise PreconditionError(f"horizon must be >= 1, got {N}")
    violations = []
    for n in range(1, N):
        for m in range(n, N - n + 1):
            if not is_subideal(product(F.term(n), F.term(m)), F.term(n + m)):
                violations.append({"n": n, "m": m})
    logger.info(f"verify_graded {F.label()}: {len(violations)} violation(s) up to N={N}")
    return CheckReport(
        name="graded",
        instance={"family": F.describe(), "horizon": N},
        verdict=Verdict.FAIL if violations else Verdict.PASS,
        witnesses=violations,
        notes=[f"evidence at horizon {N}"],
    )


def verify_filtration(F: GradedFamily, N: int) -> CheckReport:
    """Check I_{n+1} ⊆ I_n for n < N."""
    if N < 1:
        raise PreconditionError(f"horizon must be >= 1, got {N}")
    violations = [{"n": n} for n in range(N) if not is_subideal(F.term(n + 1), F.term(n))]
    return CheckReport(
        name="filtration",
        instance={"family": F.describe(), "horizon": N},
        verdict=Verdict.FAIL if violations else Verdict.PASS,
        witnesses=violations,
        notes=[f"evidence at horizon {N}"],
    )


def is_m_primary_family(F: GradedFamily, N: int) -> bool:
    return all(is_m_primary(F.term(n)) for n in range(1, N + 1))


# ============================================================================
# LINEAR GROWTH
# ============================================================================

@dataclass
class LinearGrowthWitness:
    """J_n ∩ m^{cn} = I_n ∩ m^{cn}, verified for n = 1..horizon."""

    c: int
    horizon: int
    verified: List[bool] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"c": self.c, "horizon": self.horizon, "verified": self.verified,
                "note": f"evidence at horizon {self.horizon}"}


def _growth_holds(J: GradedFamily, I: GradedFamily, c: int, n: int) -> bool:
    bound = power(maximal_ideal(J.ring), c * n)
    return intersect(J.term(n), bound) == intersect(I.term(n), bound)


def linear_growth_search(J: GradedFamily, I: GradedFamily, c_max: int, N: int) -> Optional[LinearGrowthWitness]:
    """
    Smallest c <= c_max with J_n ∩ m^{cn} = I_n ∩ m^{cn} for 1 <= n <= N.

    Args:
        J: The larger family
        I: The smaller family, I_n ⊆ J_n
        c_max: Largest constant tried
        N: Horizon

    Returns:
        LinearGrowthWitness, or None when no c <= c_max works up to N
    """
    if J.ring != I.ring:
        raise DimensionMismatchError("linear growth of families over different rings")
    for n in range(1, N + 1):
        if not is_subideal(I.term(n), J.term(n)):
            raise PreconditionError(f"term {n} of {I.label()} is not contained in term {n} of {J.label()}")
    for c in range(c_max + 1):
        if all(_growth_holds(J, I, c, n) for n in range(1, N + 1)):
            logger.info(f"linear growth ({J.label()}, {I.label()}): c={c} up to N={N}")
            return LinearGrowthWitness(c=c, horizon=N, verified=[True] * N)
    logger.info(f"linear growth ({J.label()}, {I.label()}): no c <= {c_max} up to N={N}")
    return None


def linear_growth_report(J: GradedFamily, I: GradedFamily, c_max: int, N: int) -> CheckReport:
    witness = linear_growth_search(J, I, c_max, N)
    return CheckReport(
        name="linear-growth",
        instance={"larger": J.describe(), "smaller": I.describe(), "c_max": c_max, "horizon": N},
        verdict=Verdict.EVIDENCE_ONLY if witness else Verdict.FAIL,
        lhs=witness.to_dict() if witness else None,
        notes=[f"evidence at horizon {N}"],
    )


def setup_growth_report(J: GradedFamily, I: GradedFamily, c_max: int, N: int,
                        p_list: Sequence[int]) -> CheckReport:
    """
    Evidence that the p-th power pairs ({J_p^n}, {I_p^n}) grow linearly with
    constant at most c·p, where c is the constant of the pair itself.
    """
    base = linear_growth_search(J, I, c_max, N)
    rows = []
    verdict = Verdict.EVIDENCE_ONLY if base else Verdict.FAIL
    for p in p_list:
        horizon = max(2, N // p)
        found = None
        if base is not None:
            found = linear_growth_search(Powers(J.term(p)), Powers(I.term(p)), base.c * p, horizon)
        rows.append({"p": p, "c": found.c if found else None, "bound": base.c * p if base else None,
                     "horizon": horizon})
        if found is None:
            verdict = Verdict.FAIL
    return CheckReport(
        name="setup-growth",
        instance={"larger": J.describe(), "smaller": I.describe(), "c_max": c_max, "horizon": N,
                  "p": list(p_list)},
        verdict=verdict,
        lhs=base.to_dict() if base else None,
        rhs=rows,
        notes=[f"evidence at horizon {N}"],
    )


# ============================================================================
# NOETHERIAN PERIOD
# ============================================================================

def noetherian_period(F: GradedFamily, q_max: int, N: int) -> Optional[int]:
    """
    Smallest q <= q_max with I_q^n = I_{nq} for every n with nq <= N.
    Only periods with at least one nontrivial check (2q <= N) are accepted.
    """
    for q in range(1, q_max + 1):
        if 2 * q > N:
            break
        base = F.term(q)
        if all(power(base, n) == F.term(n * q) for n in range(2, N // q + 1)):
            logger.info(f"noetherian period of {F.label()}: q={q} (checked to N={N})")
            return q
    logger.info(f"noetherian period of {F.label()}: none <= {q_max} up to N={N}")
    return None


def common_period(families: Sequence[GradedFamily], q_max: int, N: int) -> Optional[int]:
    """lcm of the per-family periods, or None if some family has none or the lcm exceeds q_max."""
    q = 1
    for family in families:
        own = noetherian_period(family, q_max, N)
        if own is None:
            return None
        q = q * own // gcd(q, own)
        if q > q_max:
            return None
    return q
