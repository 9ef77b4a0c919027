"""
monomial_core.py - Monomial ideal arithmetic
============================================

Exact arithmetic of monomial ideals in k[x_1, ..., x_d], localized at
m = (x_1, ..., x_d). Lengths of quotients are then counts of standard
monomials, which is what lattice_length.py exploits.

An ideal is stored as the antichain of its minimal exponent points:
- the zero ideal has no generators
- the unit ideal is generated by the origin

This module is responsible for:
1. Normalizing point sets to minimal generators
2. Sums, products, powers, intersections and colons
3. Saturation, radicals and minimal primes
4. Images in R/(x_i : i in S) and localizations at monomial primes
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import DimensionMismatchError, PreconditionError, ZeroIdealError

ExponentPoint = Tuple[int, ...]
VariableSubset = FrozenSet[int]


@dataclass(frozen=True)
class AmbientRing:
    """
    Polynomial ring on named variables, optionally with a monomial quotient.

    Two rings compare equal when their variables agree; the quotient only
    records which R/Q a workspace talks about.
    """

    variables: Tuple[str, ...]
    quotient: Optional[Tuple[ExponentPoint, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.variables) < 1:
            raise PreconditionError("ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise PreconditionError(f"duplicate variable names in {list(self.variables)}")
        if self.quotient is not None and tuple(0 for _ in self.variables) in self.quotient:
            raise PreconditionError("quotient ideal must be proper")

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def subset_names(self, subset: Iterable[int]) -> List[str]:
        return [self.variables[i] for i in sorted(subset)]

    def subset_from_names(self, names: Iterable[str]) -> VariableSubset:
        index = {name: i for i, name in enumerate(self.variables)}
        missing = [name for name in names if name not in index]
        if missing:
            raise PreconditionError(f"unknown variables {missing}")
        return frozenset(index[name] for name in names)


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators (sorted)."""

    ring: AmbientRing
    generators: Tuple[ExponentPoint, ...]

    @classmethod
    def zero(cls, ring: AmbientRing) -> "MonomialIdeal":
        return cls(ring, ())

    @classmethod
    def unit(cls, ring: AmbientRing) -> "MonomialIdeal":
        return cls(ring, ((0,) * ring.dimension,))

    @property
    def dimension(self) -> int:
        return self.ring.dimension

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.dimension,)

    def as_array(self) -> np.ndarray:
        return np.array(self.generators, dtype=np.int64).reshape(len(self.generators), self.dimension)

    def __contains__(self, point: Sequence[int]) -> bool:
        return contains(self, point)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_sum(self, other)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return product(self, other)

    def __pow__(self, n: int) -> "MonomialIdeal":
        return power(self, n)

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return intersect(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(monomial_str(self.ring, g) for g in self.generators) + ")"


def monomial_str(ring: AmbientRing, point: ExponentPoint) -> str:
    parts = []
    for name, exp in zip(ring.variables, point):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts) if parts else "1"


# ============================================================================
# CONSTRUCTION
# ============================================================================

def _minimal_points(points: Set[ExponentPoint], d: int) -> Tuple[ExponentPoint, ...]:
    # Visiting by total degree guarantees a dominating point is already kept.
    ordered = sorted(points, key=lambda p: (sum(p), p))
    kept = np.empty((len(ordered), d), dtype=np.int64)
    count = 0
    for point in ordered:
        if count and np.all(kept[:count] <= point, axis=1).any():
            continue
        kept[count] = point
        count += 1
    return tuple(sorted(tuple(int(v) for v in row) for row in kept[:count]))


def normalize(ring: AmbientRing, points: Iterable[Sequence[int]]) -> MonomialIdeal:
    """
    Build the ideal generated by `points`, keeping only minimal ones.

    Raises:
        DimensionMismatchError: a point has the wrong number of coordinates
    """
    d = ring.dimension
    clean: Set[ExponentPoint] = set()
    for point in points:
        point = tuple(int(v) for v in point)
        if len(point) != d:
            raise DimensionMismatchError(f"point {list(point)} has {len(point)} coordinates, ring has {d}")
        if any(v < 0 for v in point):
            raise PreconditionError(f"negative exponent in {list(point)}")
        clean.add(point)
    if not clean:
        return MonomialIdeal.zero(ring)
    if (0,) * d in clean:
        return MonomialIdeal.unit(ring)
    return MonomialIdeal(ring, _minimal_points(clean, d))


def maximal_ideal(ring: AmbientRing) -> MonomialIdeal:
    return prime_ideal(ring, range(ring.dimension))


def prime_ideal(ring: AmbientRing, subset: Iterable[int]) -> MonomialIdeal:
    """The monomial prime (x_i : i in subset)."""
    d = ring.dimension
    return normalize(ring, [tuple(1 if j == i else 0 for j in range(d)) for i in subset])


def _check_same_ring(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.ring != J.ring:
        raise DimensionMismatchError(f"ideals live in different rings: {I.ring.variables} vs {J.ring.variables}")


# ============================================================================
# ARITHMETIC
# ============================================================================

def contains(I: MonomialIdeal, a: Sequence[int]) -> bool:
    """True iff x^a lies in I."""
    if len(a) != I.dimension:
        raise DimensionMismatchError(f"point {list(a)} does not match dimension {I.dimension}")
    if I.is_zero:
        return False
    return bool(np.all(I.as_array() <= np.asarray(a, dtype=np.int64), axis=1).any())


def is_subideal(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """True iff I ⊆ J."""
    _check_same_ring(I, J)
    if I.is_zero:
        return True
    if J.is_zero:
        return False
    gens_j = J.as_array()
    return all(np.all(gens_j <= g, axis=1).any() for g in I.as_array())


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(I, J)
    return normalize(I.ring, I.generators + J.generators)


@lru_cache(maxsize=8192)
def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(I, J)
    if I.is_zero or J.is_zero:
        return MonomialIdeal.zero(I.ring)
    if I.is_unit:
        return J
    if J.is_unit:
        return I
    sums = (I.as_array()[:, None, :] + J.as_array()[None, :, :]).reshape(-1, I.dimension)
    return normalize(I.ring, map(tuple, sums.tolist()))


@lru_cache(maxsize=8192)
def power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    """I^n by iterated product; I^0 is the unit ideal."""
    if n < 0:
        raise PreconditionError(f"negative power {n}")
    if n == 0:
        return MonomialIdeal.unit(I.ring)
    if n == 1:
        return I
    return product(power(I, n - 1), I)


def multi_power(ideals: Sequence[MonomialIdeal], exponents: Sequence[int]) -> MonomialIdeal:
    """The product of ideals[j]^exponents[j]."""
    if not ideals:
        raise PreconditionError("need at least one ideal")
    result = MonomialIdeal.unit(ideals[0].ring)
    for ideal, exp in zip(ideals, exponents):
        result = product(result, power(ideal, exp))
    return result


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(I, J)
    if I.is_zero or J.is_zero:
        return MonomialIdeal.zero(I.ring)
    lcms = np.maximum(I.as_array()[:, None, :], J.as_array()[None, :, :]).reshape(-1, I.dimension)
    return normalize(I.ring, map(tuple, lcms.tolist()))


def _colon_monomial(I: MonomialIdeal, g: ExponentPoint) -> MonomialIdeal:
    if I.is_zero:
        return I
    shifted = np.maximum(I.as_array() - np.asarray(g, dtype=np.int64), 0)
    return normalize(I.ring, map(tuple, shifted.tolist()))


def colon(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """
    (I : J), the intersection of (I : x^g) over the generators g of J.

    Raises:
        ZeroIdealError: J is the zero ideal
    """
    _check_same_ring(I, J)
    if J.is_zero:
        raise ZeroIdealError("colon by zero ideal")
    result = None
    for g in J.generators:
        part = _colon_monomial(I, g)
        result = part if result is None else intersect(result, part)
    return result


@lru_cache(maxsize=1024)
def saturate(I: MonomialIdeal) -> MonomialIdeal:
    """(I : m^∞). Each step enlarges the ideal, so the loop stops at a fixed point."""
    m = maximal_ideal(I.ring)
    current = I
    while True:
        following = colon(current, m)
        if following == current:
            return current
        current = following


def radical(I: MonomialIdeal) -> MonomialIdeal:
    return normalize(I.ring, [tuple(min(v, 1) for v in g) for g in I.generators])


def is_squarefree(I: MonomialIdeal) -> bool:
    return all(v <= 1 for g in I.generators for v in g)


# ============================================================================
# PRIMES AND DIMENSION
# ============================================================================

def _covers(edges: Tuple[VariableSubset, ...], chosen: VariableSubset) -> Set[VariableSubset]:
    uncovered = next((e for e in edges if not (e & chosen)), None)
    if uncovered is None:
        return {chosen}
    found: Set[VariableSubset] = set()
    for v in sorted(uncovered):
        found |= _covers(edges, chosen | {v})
    return found


@lru_cache(maxsize=1024)
def minimal_primes(I: MonomialIdeal) -> Tuple[VariableSubset, ...]:
    """
    Minimal primes of I as variable subsets: the inclusion-minimal vertex
    covers of the generator supports.

    Raises:
        PreconditionError: I is zero or the unit ideal
    """
    if I.is_zero or I.is_unit:
        raise PreconditionError(f"minimal primes need a proper nonzero ideal, got {I}")
    supports = {frozenset(i for i, v in enumerate(g) if v > 0) for g in I.generators}
    # Covering the inclusion-minimal supports covers all of them.
    edges = tuple(sorted((s for s in supports if not any(t < s for t in supports)),
                         key=lambda s: (len(s), sorted(s))))
    covers = _covers(edges, frozenset())
    minimal = [c for c in covers if not any(other < c for other in covers)]
    return tuple(sorted(minimal, key=lambda s: (len(s), sorted(s))))


def krull_dimension(Q: MonomialIdeal) -> int:
    """dim R/Q; the zero ideal gives d and the unit ideal gives -1."""
    if Q.is_zero:
        return Q.dimension
    if Q.is_unit:
        return -1
    return Q.dimension - min(len(P) for P in minimal_primes(Q))


def is_m_primary(I: MonomialIdeal) -> bool:
    """
    True iff every variable has a pure power in I. The unit ideal counts as
    m-primary (its colength is 0); the zero ideal does not.
    """
    return pure_power_exponents(I) is not None


def pure_power_exponents(I: MonomialIdeal) -> Optional[Tuple[int, ...]]:
    """Exponents b_i of the minimal pure powers x_i^{b_i} in I, or None if some is missing."""
    if I.is_zero:
        return None
    if I.is_unit:
        return (0,) * I.dimension
    d = I.dimension
    best: List[Optional[int]] = [None] * d
    for g in I.generators:
        support = [i for i, v in enumerate(g) if v > 0]
        if len(support) == 1:
            i = support[0]
            if best[i] is None or g[i] < best[i]:
                best[i] = g[i]
    if any(b is None for b in best):
        return None
    return tuple(best)


def monomials_of_degree(d: int, degree: int) -> List[ExponentPoint]:
    """All exponent points of the given total degree, in lexicographic order."""
    points = []
    for combo in combinations_with_replacement(range(d), degree):
        point = [0] * d
        for i in combo:
            point[i] += 1
        points.append(tuple(point))
    return sorted(points, reverse=True)


# ============================================================================
# CHANGE OF RING
# ============================================================================

def kill_variables(I: MonomialIdeal, subset: Iterable[int]) -> MonomialIdeal:
    """
    Image of I in R/(x_i : i in subset), as an ideal of the polynomial ring on
    the remaining variables. Generators with a positive exponent in the
    subset map to zero and are dropped.
    """
    subset = frozenset(subset)
    if not subset:
        return I
    keep = [i for i in range(I.dimension) if i not in subset]
    if not keep:
        raise PreconditionError("cannot kill every variable")
    ring = AmbientRing(tuple(I.ring.variables[i] for i in keep))
    images = [tuple(g[i] for i in keep) for g in I.generators if all(g[i] == 0 for i in subset)]
    return normalize(ring, images)


def localize_at_prime(I: MonomialIdeal, prime: Iterable[int]) -> MonomialIdeal:
    """Set every variable outside `prime` to 1 and renormalize in the remaining ones."""
    prime = frozenset(prime)
    if not prime:
        raise PreconditionError("localization needs a nonempty prime")
    if len(prime) == I.dimension:
        return I
    keep = sorted(prime)
    ring = AmbientRing(tuple(I.ring.variables[i] for i in keep))
    return normalize(ring, [tuple(g[i] for i in keep) for g in I.generators])
