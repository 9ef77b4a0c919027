"""
fourier_motzkin.py - Exact feasibility of small linear systems
==============================================================

Systems are lists of rows (coefficients, rhs) meaning coefficients·x <= rhs
over the rationals. All rows are kept integral: combining a row with a
positive coefficient p and one with a negative coefficient -n gives
n·row_p + p·row_n, which is then divided by the gcd of its entries.
"""

import logging
from math import gcd
from typing import List, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

Row = Tuple[Tuple[int, ...], int]


def _reduce(coeffs: Sequence[int], rhs: int) -> Row:
    g = 0
    for v in coeffs:
        g = gcd(g, v)
    g = gcd(g, rhs)
    if g > 1:
        return tuple(v // g for v in coeffs), rhs // g
    return tuple(coeffs), rhs


def _prune(rows: Set[Row]) -> List[Row]:
    # Among rows with identical left sides only the tightest matters.
    tightest = {}
    for coeffs, rhs in rows:
        if coeffs not in tightest or rhs < tightest[coeffs]:
            tightest[coeffs] = rhs
    return sorted(tightest.items())


def eliminate(rows: Sequence[Row], var: int) -> List[Row]:
    """Project the system onto the variables other than `var`."""
    positive, negative, kept = [], [], set()
    for coeffs, rhs in rows:
        a = coeffs[var]
        if a > 0:
            positive.append((coeffs, rhs))
        elif a < 0:
            negative.append((coeffs, rhs))
        else:
            kept.add(_reduce(coeffs, rhs))
    for pc, pr in positive:
        p = pc[var]
        for nc, nr in negative:
            n = -nc[var]
            coeffs = [n * a + p * b for a, b in zip(pc, nc)]
            kept.add(_reduce(coeffs, n * pr + p * nr))
    return _prune(kept)


def feasible(rows: Sequence[Row], num_vars: int) -> bool:
    """True iff some rational x satisfies every row."""
    current = _prune({_reduce(c, r) for c, r in rows})
    for var in range(num_vars):
        current = eliminate(current, var)
        if any(all(v == 0 for v in c) and r < 0 for c, r in current):
            return False
    return all(r >= 0 for c, r in current)
