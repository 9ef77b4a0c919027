"""
multiplicity_poly.py - Mixed multiplicity polynomials by exact interpolation
============================================================================

For m-primary I_1..I_s and M = R/Q the function

    𝐦 ↦ λ(M / I_1^{m_1}⋯I_s^{m_s} M)

agrees with a polynomial of total degree dim M for 𝐦 ≫ 0. Its degree-d
homogeneous part is Σ e_𝐝/𝐝! · 𝐦^𝐝, which defines the mixed
multiplicities e_𝐝. The general (non m-primary) version uses

    (n_0, 𝐧) ↦ λ(I^{n_0}𝐉^𝐧 / I^{n_0+1}𝐉^𝐧)

of total degree d-1 and gives e_{(d_0, 𝐝)}.

Polynomials are recovered with tensor Newton forward differences on a
window 𝐦_0 + [0..D]^s. A fit is accepted only when the window shifted by 𝟏
yields the same coefficients; otherwise the offset doubles up to a cap.
Everything is exact: Python integers and sympy rationals.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from math import factorial, prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import Matrix, Poly, QQ, Rational

from .errors import (
    DimensionMismatchError,
    FitNotStabilizedError,
    PreconditionError,
    SingularSystemError,
    StructuralCheckError,
)
from .lattice_length import default_certificate, module_colength, relative_length
from .monomial_core import (
    MonomialIdeal,
    ideal_sum,
    is_m_primary,
    krull_dimension,
    monomials_of_degree,
    multi_power,
    power,
    product,
)
from .reports import rational_str, type_key
from .settings import EngineSettings

logger = logging.getLogger(__name__)

TypeVector = Tuple[int, ...]


@dataclass
class MultiplicityTable:
    """
    Exact e-values indexed by type vectors.

    For general tables (general=True) the first index is d_0 and the
    corresponding G-term is e/((d_0+1)!·𝐝!) · t_0^{d_0+1} 𝐭^𝐝.
    """

    arity: int
    degree: int
    entries: Dict[TypeVector, Rational]
    general: bool = False
    exact: bool = True
    mode: str = "exact"
    diagnostics: Dict = field(default_factory=dict)

    @classmethod
    def zero(cls, arity: int, degree: int, general: bool = False) -> "MultiplicityTable":
        return cls(arity, degree, {t: Rational(0) for t in monomials_of_degree(arity, degree)}, general)

    @classmethod
    def from_coefficients(cls, arity: int, degree: int, coefficients: Dict[TypeVector, Rational],
                          general: bool = False) -> "MultiplicityTable":
        """e_𝐝 = (coefficient of 𝐦^𝐝) · ∏ d_i!, over all types of the given degree."""
        entries = {}
        for t in monomials_of_degree(arity, degree):
            entries[t] = Rational(coefficients.get(t, 0)) * prod(factorial(v) for v in t)
        return cls(arity, degree, entries, general)

    def __getitem__(self, index: Sequence[int]) -> Rational:
        return self.entries[tuple(index)]

    def to_dict(self) -> Dict:
        return {
            "arity": self.arity,
            "degree": self.degree,
            "general": self.general,
            "exact": self.exact,
            "mode": self.mode,
            "entries": {type_key(t): rational_str(v) for t, v in sorted(self.entries.items(), reverse=True)},
            "diagnostics": self.diagnostics,
        }


@dataclass
class PolynomialFit:
    offset: Tuple[int, ...]
    window: int
    coefficients: Dict[TypeVector, Rational]
    stable: bool
    diagnostics: Dict = field(default_factory=dict)

    def homogeneous_part(self, degree: int) -> Dict[TypeVector, Rational]:
        return {e: c for e, c in self.coefficients.items() if sum(e) == degree}

    def evaluate(self, point: Sequence[int]) -> Rational:
        return sum((c * prod(Rational(p) ** e for p, e in zip(point, exps))
                    for exps, c in self.coefficients.items()), Rational(0))


# ============================================================================
# INTERPOLATION
# ============================================================================

def _forward_differences(values: np.ndarray, D: int) -> np.ndarray:
    """Replace a grid of samples by Δ^𝐤 f(𝐦_0) for 𝐤 ∈ [0..D]^s."""
    table = values
    for axis in range(values.ndim):
        moved = np.moveaxis(table, axis, 0)
        leading = [moved[0]]
        current = moved
        for _ in range(D):
            current = current[1:] - current[:-1]
            leading.append(current[0])
        table = np.moveaxis(np.array(leading, dtype=object), 0, axis)
    return table


@lru_cache(maxsize=4096)
def _binomial_poly(arity: int, axis: int, shift: int, k: int) -> Poly:
    syms = sympy.symbols(f"t1:{arity + 1}")
    t = syms[axis]
    expr = sympy.prod([t - shift - j for j in range(k)]) / factorial(k)
    return Poly(expr, *syms, domain=QQ)


def _interpolate(samples: Dict[Tuple[int, ...], int], offset: Tuple[int, ...], D: int) -> Dict[TypeVector, Rational]:
    s = len(offset)
    values = np.empty((D + 1,) * s, dtype=object)
    for k in cartesian(range(D + 1), repeat=s):
        values[k] = samples[tuple(o + i for o, i in zip(offset, k))]
    deltas = _forward_differences(values, D)
    syms = sympy.symbols(f"t1:{s + 1}")
    poly = Poly(0, *syms, domain=QQ)
    for k in cartesian(range(D + 1), repeat=s):
        delta = deltas[k]
        if delta == 0:
            continue
        term = Poly(delta, *syms, domain=QQ)
        for axis, ki in enumerate(k):
            if ki:
                term = term * _binomial_poly(s, axis, offset[axis], ki)
        poly = poly + term
    return {exps: Rational(c) for exps, c in poly.as_dict().items() if c != 0}


def _sample(f: Callable[[Tuple[int, ...]], int], points: List[Tuple[int, ...]],
            cache: Dict[Tuple[int, ...], int], workers: int) -> None:
    missing = [p for p in points if p not in cache]
    if workers > 1 and len(missing) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(f, missing))
    else:
        values = [f(p) for p in missing]
    for point, value in zip(missing, values):
        cache[point] = value


def fit_numerical_function(f: Callable[[Tuple[int, ...]], int], arity: int, D: int,
                           start: Optional[Sequence[int]] = None, cap: int = 64,
                           workers: int = 1) -> PolynomialFit:
    """
    Fit a polynomial of total degree <= D to f for large arguments.

    Args:
        f: Function on ℕ^arity
        arity: Number of arguments
        D: Total degree bound
        start: Initial offset 𝐦_0 (default (D+1)·𝟏)
        cap: Largest coordinate the offset may reach
        workers: Threads used for sampling

    Returns:
        PolynomialFit whose coefficients agree on two shifted windows

    Raises:
        FitNotStabilizedError: no agreement before the offset passes `cap`
    """
    if D < 0:
        raise PreconditionError(f"degree bound must be >= 0, got {D}")
    offset = tuple(start) if start is not None else (D + 1,) * arity
    if len(offset) != arity:
        raise DimensionMismatchError(f"offset {list(offset)} does not have arity {arity}")
    cache: Dict[Tuple[int, ...], int] = {}
    attempts = 0
    while True:
        attempts += 1
        shifted = tuple(o + 1 for o in offset)
        points = sorted({tuple(o + i for o, i in zip(base, k))
                         for base in (offset, shifted)
                         for k in cartesian(range(D + 1), repeat=arity)})
        _sample(f, points, cache, workers)
        first = _interpolate(cache, offset, D)
        second = _interpolate(cache, shifted, D)
        if first == second:
            logger.debug(f"fit stable at offset {offset} after {attempts} attempt(s)")
            return PolynomialFit(offset=offset, window=D + 1, coefficients=first, stable=True,
                                 diagnostics={"attempts": attempts, "samples": len(cache)})
        following = tuple(2 * o if o > 0 else 1 for o in offset)
        if max(following) > cap:
            raise FitNotStabilizedError(
                f"not yet polynomial at cap {cap} (offset {list(offset)})",
                first={"offset": list(offset), "coefficients": _coefficients_json(first)},
                second={"offset": list(shifted), "coefficients": _coefficients_json(second)},
            )
        logger.info(f"fit disagreed at offset {list(offset)}; retrying at {list(following)}")
        offset = following


def _coefficients_json(coefficients: Dict[TypeVector, Rational]) -> Dict[str, str]:
    return {",".join(map(str, e)): str(c) for e, c in sorted(coefficients.items())}


def solve_homogeneous(grid: Sequence[Tuple[int, ...]], values: Sequence[Rational], degree: int,
                      basis: Optional[Sequence[TypeVector]] = None) -> Dict[TypeVector, Rational]:
    """
    Coefficients of the homogeneous polynomial of the given degree taking
    `values` on `grid` (by default the basis is every monomial of that degree).
    """
    arity = len(grid[0])
    basis = list(basis) if basis is not None else monomials_of_degree(arity, degree)
    A = Matrix([[prod(Rational(p) ** e for p, e in zip(point, exps)) for exps in basis] for point in grid])
    b = Matrix([Rational(v) for v in values])
    if A.rows != A.cols or A.det() == 0:
        raise SingularSystemError("interpolation system is singular")
    solution = A.LUsolve(b)
    return {exps: Rational(solution[i]) for i, exps in enumerate(basis)}


# ============================================================================
# MIXED MULTIPLICITIES
# ============================================================================

def _check_ring(ideals: Sequence[MonomialIdeal], Q: Optional[MonomialIdeal]) -> None:
    ring = ideals[0].ring
    if any(I.ring != ring for I in ideals) or (Q is not None and Q.ring != ring):
        raise DimensionMismatchError("ideals live in different rings")


@lru_cache(maxsize=512)
def _mixed_table(Q: Optional[MonomialIdeal], ideals: Tuple[MonomialIdeal, ...], degree: int, D: int,
                 settings: EngineSettings) -> MultiplicityTable:
    d = ideals[0].dimension
    s = len(ideals)

    def sample(point: Tuple[int, ...]) -> int:
        return module_colength(Q, multi_power(ideals, point))

    fit = fit_numerical_function(sample, s, D, start=(settings.start_offset(d),) * s,
                                 cap=settings.fit_cap, workers=settings.workers)
    table = MultiplicityTable.from_coefficients(s, degree, fit.homogeneous_part(degree))
    negative = [t for t, v in table.entries.items() if v < 0]
    if negative:
        logger.warning(f"negative mixed multiplicities at types {negative}")
    return table


def mixed_multiplicities(Q: Optional[MonomialIdeal], ideals: Sequence[MonomialIdeal],
                         settings: Optional[EngineSettings] = None,
                         degree: Optional[int] = None) -> MultiplicityTable:
    """
    Mixed multiplicities e_𝐝(R/Q; I_1..I_s).

    Args:
        Q: Ideal defining the module R/Q, or None for M = R
        ideals: Ideals that are m-primary modulo Q
        settings: Fit configuration
        degree: Degree of the extracted homogeneous part (default d = dim R)

    Returns:
        MultiplicityTable over all types 𝐝 with |𝐝| = degree
    """
    settings = settings or EngineSettings()
    if not ideals:
        raise PreconditionError("need at least one ideal")
    _check_ring(ideals, Q)
    d = ideals[0].dimension
    degree = d if degree is None else degree
    for I in ideals:
        total = I if Q is None else ideal_sum(Q, I)
        if not is_m_primary(total):
            raise PreconditionError(f"{I} is not m-primary modulo {Q if Q is not None else '(0)'}")
    D = d if Q is None else krull_dimension(Q)
    if D < degree:
        return MultiplicityTable.zero(len(ideals), degree)
    logger.info(f"fitting mixed multiplicities of {len(ideals)} ideal(s), degree {degree}")
    return _mixed_table(Q, tuple(ideals), degree, D, settings)


@lru_cache(maxsize=256)
def _general_table(I: MonomialIdeal, ideals: Tuple[MonomialIdeal, ...], settings: EngineSettings) -> MultiplicityTable:
    d = I.dimension
    s = len(ideals) + 1
    c = default_certificate(I)

    def sample(point: Tuple[int, ...]) -> int:
        J = power(I, point[0])
        if ideals:
            J = product(J, multi_power(ideals, point[1:]))
        return relative_length(J, I, c)

    fit = fit_numerical_function(sample, s, d - 1, start=(settings.start_offset(d),) * s,
                                 cap=settings.fit_cap, workers=settings.workers)
    table = MultiplicityTable.from_coefficients(s, d - 1, fit.homogeneous_part(d - 1), general=True)
    return table


def general_mixed_multiplicities(I: MonomialIdeal, ideals: Sequence[MonomialIdeal],
                                 settings: Optional[EngineSettings] = None) -> MultiplicityTable:
    """
    Mixed multiplicities e_{(d_0, 𝐝)}(I | J_1..J_r) with |(d_0, 𝐝)| = d - 1.

    Raises:
        PreconditionError: I not m-primary or some J_i is zero
    """
    settings = settings or EngineSettings()
    _check_ring([I] + list(ideals), None)
    if not is_m_primary(I):
        raise PreconditionError(f"{I} is not m-primary")
    if any(J.is_zero for J in ideals):
        raise PreconditionError("general mixed multiplicities need nonzero ideals")
    logger.info(f"fitting general mixed multiplicities with {len(ideals)} ideal(s)")
    return _general_table(I, tuple(ideals), settings)


def evaluate_G(table: MultiplicityTable, point: Sequence) -> Rational:
    """Value of the G polynomial of `table` at `point`."""
    if len(point) != table.arity:
        raise DimensionMismatchError(f"point {list(point)} does not have arity {table.arity}")
    total = Rational(0)
    for t, e in table.entries.items():
        if e == 0:
            continue
        if table.general:
            shifted = (t[0] + 1,) + tuple(t[1:])
        else:
            shifted = t
        norm = prod(factorial(v) for v in shifted)
        total += e / norm * prod(Rational(p) ** v for p, v in zip(point, shifted))
    return total


def check_no_pure_terms(coefficients: Dict[TypeVector, Rational]) -> None:
    """
    A general G must vanish whenever t_0 = 0, so every term of a G solved
    in the basis t_0^{a}𝐭^𝐝 needs a > 0.

    Raises:
        StructuralCheckError: some coefficient with a = 0 is nonzero
    """
    pure = {e: c for e, c in coefficients.items() if e[0] == 0 and c != 0}
    if pure:
        raise StructuralCheckError(
            f"G has terms free of t0: {{{', '.join(f'{type_key(e)}: {c}' for e, c in sorted(pure.items()))}}}")
