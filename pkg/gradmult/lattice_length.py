"""
lattice_length.py - Lengths as lattice-point counts
===================================================

For a monomial ideal I the length λ(R/I) is the number of exponent points
outside I. Counting works column by column: for each prefix
(a_1, ..., a_{d-1}) the points of I above it form a ray starting at

    h(prefix) = min { g_d : g generator, g_i <= a_i for i < d }

so the column contributes min(h, box height) points outside I. Columns are
evaluated for the whole box at once with numpy.

Box bounds:
- colength: every point outside an m-primary I lies in ∏[0, b_i - 1]
  where x_i^{b_i} is the minimal pure power of x_i in I.
- relative_length: a point a of J is a = g + e with g a generator of J;
  if |e| >= c and m^c ⊆ I then x^a ∈ I·J. So points of J outside I·J lie
  in the box bounded by max_g g_i + c - 1.
"""

import logging
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InfiniteColengthError, PreconditionError
from .monomial_core import (
    MonomialIdeal,
    contains,
    ideal_sum,
    is_m_primary,
    is_subideal,
    localize_at_prime,
    maximal_ideal,
    minimal_primes,
    power,
    product,
    pure_power_exponents,
)

logger = logging.getLogger(__name__)

LengthValue = int


def _column_heights(ideal: MonomialIdeal, prefix_bounds: Sequence[int], cap: int) -> np.ndarray:
    """
    Height of the lowest point of `ideal` over every prefix in the box
    ∏[0, prefix_bounds[i]], clipped to `cap`.
    """
    shape = tuple(b + 1 for b in prefix_bounds)
    heights = np.full(shape, cap, dtype=np.int64)
    if ideal.is_zero:
        return heights
    grid = np.indices(shape, dtype=np.int64)
    k = len(shape)
    for g in ideal.generators:
        below = np.all(grid >= np.asarray(g[:-1], dtype=np.int64).reshape((k,) + (1,) * k), axis=0)
        np.minimum(heights, np.where(below, g[-1], cap), out=heights)
    return heights


def count_outside(ideal: MonomialIdeal, upper: Sequence[int]) -> int:
    """Number of points of the box ∏[0, upper_i] not in `ideal`."""
    if any(u < 0 for u in upper):
        return 0
    cap = upper[-1] + 1
    if ideal.dimension == 1:
        lowest = ideal.generators[0][0] if not ideal.is_zero else cap
        return int(min(lowest, cap))
    return int(_column_heights(ideal, upper[:-1], cap).sum())


def colength(I: MonomialIdeal) -> LengthValue:
    """
    λ(R/I) for an m-primary monomial ideal.

    Raises:
        InfiniteColengthError: I is not m-primary
    """
    bounds = pure_power_exponents(I)
    if bounds is None:
        raise InfiniteColengthError(f"infinite colength: {I} is not m-primary")
    if I.is_unit:
        return 0
    return count_outside(I, [b - 1 for b in bounds])


def module_colength(Q: Optional[MonomialIdeal], I: MonomialIdeal) -> LengthValue:
    """λ(M/IM) for M = R/Q, i.e. the colength of Q + I. Q=None means M=R."""
    total = I if Q is None else ideal_sum(Q, I)
    if not is_m_primary(total):
        raise InfiniteColengthError(f"infinite colength: {total} is not m-primary")
    return colength(total)


@lru_cache(maxsize=256)
def _certificate_holds(I: MonomialIdeal, c: int) -> bool:
    return is_subideal(power(maximal_ideal(I.ring), c), I)


def default_certificate(I: MonomialIdeal) -> int:
    """Σ b_i over the minimal pure powers x_i^{b_i} of I; m^c ⊆ I for this c."""
    bounds = pure_power_exponents(I)
    if bounds is None:
        raise PreconditionError(f"{I} is not m-primary")
    return sum(bounds)


def relative_length(J: MonomialIdeal, I: MonomialIdeal, certificate_c: Optional[int] = None) -> LengthValue:
    """
    λ(J / I·J) for an m-primary I.

    Args:
        J: Any monomial ideal of the same ring
        I: m-primary ideal
        certificate_c: c with m^c ⊆ I; derived from I when omitted

    Returns:
        Count of points in J outside I·J
    """
    if not is_m_primary(I):
        raise PreconditionError(f"relative length needs an m-primary ideal, got {I}")
    if J.is_zero or I.is_unit:
        return 0
    if certificate_c is None:
        c = default_certificate(I)
    else:
        c = int(certificate_c)
        if c < 1 or not _certificate_holds(I, c):
            raise PreconditionError(f"m^{c} is not contained in {I}")
    gens = J.as_array()
    upper = [int(v) for v in gens.max(axis=0) + c - 1]
    return count_outside(product(I, J), upper) - count_outside(J, upper)


def localized_length(Q: MonomialIdeal, prime: Iterable[int]) -> LengthValue:
    """
    Length of (R/Q) localized at the monomial prime given by `prime`.

    Raises:
        PreconditionError: prime is not minimal over Q
    """
    prime = frozenset(prime)
    if prime not in minimal_primes(Q):
        raise PreconditionError(f"variables {sorted(prime)} do not form a minimal prime of {Q}")
    return colength(localize_at_prime(Q, prime))


def naive_colength(I: MonomialIdeal, upper: Sequence[int]) -> int:
    """Point-by-point scan of ∏[0, upper_i]; reference implementation for tests."""
    grid = np.indices(tuple(u + 1 for u in upper)).reshape(len(upper), -1).T
    return sum(1 for point in grid.tolist() if not contains(I, point))
