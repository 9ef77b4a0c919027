"""
newton_geometry.py - Newton polyhedra of monomial ideals
========================================================

NP(I) = conv(generators) + ℝ^d_{>=0}. Its lattice points are the exponents
of the integral closure of I, and for m-primary I the volume of the
complement ℝ^d_{>=0} \\ NP(I) is e_d(I)/d!. This module is an exact
geometry-side oracle for the counting pipeline.

This module is responsible for:
1. Facet (half-space) descriptions of NP(I) for d <= 3
2. Membership in n·NP(I) by exact Fourier-Motzkin elimination
3. Integral closures of powers
4. Covolumes and mixed covolume tables
5. Scaled staircase bodies for plotting
"""

import logging
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Rational

from .errors import PreconditionError, UnsupportedDimensionError
from .fourier_motzkin import feasible
from .monomial_core import (
    ExponentPoint,
    MonomialIdeal,
    is_m_primary,
    monomials_of_degree,
    multi_power,
    normalize,
)
from .multiplicity_poly import MultiplicityTable, solve_homogeneous

if TYPE_CHECKING:
    from .graded_families import GradedFamily

logger = logging.getLogger(__name__)

HalfSpace = Tuple[Tuple[int, ...], int]


def _integer_normal(vectors: List[Tuple[int, ...]], d: int) -> Optional[Tuple[int, ...]]:
    if d == 1:
        return (1,)
    if d == 2:
        (u,) = vectors
        return (u[1], -u[0])
    u, v = vectors
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


@lru_cache(maxsize=1024)
def newton_halfspaces(I: MonomialIdeal) -> Tuple[HalfSpace, ...]:
    """
    Facet inequalities w·x >= b of NP(I), with w >= 0 integral and primitive.

    Every candidate hyperplane passes through d affinely independent items
    taken from the generators and the recession directions e_i (at least one
    generator). A candidate is kept when its normal has a single sign and its
    chosen points attain min w·g.

    Raises:
        UnsupportedDimensionError: d > 3
    """
    d = I.dimension
    if d > 3:
        raise UnsupportedDimensionError(f"unsupported dimension for exact facets: d={d}")
    if I.is_zero:
        raise PreconditionError("Newton polyhedron of the zero ideal")
    gens = I.generators
    directions = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    items = [("point", g) for g in gens] + [("direction", e) for e in directions]
    found = set()
    for combo in combinations(items, d):
        points = [v for kind, v in combo if kind == "point"]
        if not points:
            continue
        base = points[0]
        vectors = [tuple(p[i] - base[i] for i in range(d)) for p in points[1:]]
        vectors += [v for kind, v in combo if kind == "direction"]
        normal = _integer_normal(vectors, d)
        if normal is None or all(v == 0 for v in normal):
            continue
        if all(v <= 0 for v in normal):
            normal = tuple(-v for v in normal)
        if any(v < 0 for v in normal):
            continue
        g = 0
        for v in normal:
            g = gcd(g, v)
        normal = tuple(v // g for v in normal)
        b = min(sum(w * x for w, x in zip(normal, p)) for p in gens)
        if sum(w * x for w, x in zip(normal, base)) != b:
            continue
        found.add((normal, b))
    return tuple(sorted(found))


def np_membership(I: MonomialIdeal, n: int, a: Sequence[int]) -> bool:
    """
    True iff a ∈ n·NP(I): some λ >= 0 with Σλ = n and Σ λ_g·g <= a.
    """
    if len(a) != I.dimension:
        raise PreconditionError(f"point {list(a)} does not match dimension {I.dimension}")
    if I.is_zero:
        raise PreconditionError("Newton polyhedron of the zero ideal")
    if n == 0 or I.is_unit:
        return all(v >= 0 for v in a)
    gens = I.generators
    if any(all(n * g[i] <= a[i] for i in range(len(a))) for g in gens):
        return True
    k = len(gens)
    rows = []
    for j in range(k):
        rows.append((tuple(-1 if t == j else 0 for t in range(k)), 0))
    rows.append(((1,) * k, n))
    rows.append(((-1,) * k, -n))
    for i in range(I.dimension):
        rows.append((tuple(g[i] for g in gens), int(a[i])))
    return feasible(rows, k)


@lru_cache(maxsize=512)
def integral_closure_power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    """
    The integral closure of I^n: minimal lattice points of n·NP(I), which all
    lie in the box ∏[0, n·max_g g_i].
    """
    if I.is_zero:
        raise PreconditionError("integral closure of the zero ideal")
    if n == 0 or I.is_unit:
        return MonomialIdeal.unit(I.ring)
    d = I.dimension
    shape = tuple(n * int(v) + 1 for v in I.as_array().max(axis=0))
    points = np.indices(shape).reshape(d, -1).T
    if d <= 3:
        halfspaces = newton_halfspaces(I)
        normals = np.array([w for w, _ in halfspaces], dtype=np.int64)
        bounds = np.array([n * b for _, b in halfspaces], dtype=np.int64)
        inside = np.all(points @ normals.T >= bounds, axis=1)
    else:
        inside = np.array([np_membership(I, n, p) for p in points.tolist()], dtype=bool)
    inside = inside.reshape(shape)
    # The set is upward closed, so a point is minimal iff no x - e_i is in it.
    minimal = inside.copy()
    for axis in range(d):
        below = np.zeros(shape, dtype=bool)
        index = [slice(None)] * d
        index[axis] = slice(1, None)
        source = [slice(None)] * d
        source[axis] = slice(None, -1)
        below[tuple(index)] = inside[tuple(source)]
        minimal &= ~below
    return normalize(I.ring, map(tuple, np.argwhere(minimal).tolist()))


def _hull_2d(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Counter-clockwise convex hull vertices (monotone chain, collinear points dropped)."""
    points = sorted(set(points))
    if len(points) <= 2:
        return points

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple[int, int]] = []
    for p in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[int, int]] = []
    for p in reversed(points):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _facet_points(I: MonomialIdeal, normal: Tuple[int, ...], b: int) -> List[ExponentPoint]:
    return [g for g in I.generators if sum(w * x for w, x in zip(normal, g)) == b]


@lru_cache(maxsize=1024)
def covolume(I: MonomialIdeal) -> Rational:
    """
    Volume of ℝ^d_{>=0} \\ NP(I) for m-primary I and d <= 3.

    The closure of the complement is the union of the cones from the origin
    over the compact facets, so the volume is a sum of simplex volumes.
    """
    d = I.dimension
    if d > 3:
        raise UnsupportedDimensionError(f"unsupported dimension for exact covolume: d={d}")
    if not is_m_primary(I):
        raise PreconditionError(f"covolume needs an m-primary ideal, got {I}")
    if I.is_unit:
        return Rational(0)
    if d == 1:
        return Rational(I.generators[0][0])
    total = Rational(0)
    for normal, b in newton_halfspaces(I):
        if b <= 0 or any(w == 0 for w in normal):
            continue
        on_facet = _facet_points(I, normal, b)
        if d == 2:
            p, q = min(on_facet), max(on_facet)
            total += Rational(abs(p[0] * q[1] - p[1] * q[0]), 2)
            continue
        drop = max(range(3), key=lambda i: normal[i])
        keep = [i for i in range(3) if i != drop]
        lift = {(p[keep[0]], p[keep[1]]): p for p in on_facet}
        polygon = [lift[v] for v in _hull_2d(list(lift))]
        for i in range(1, len(polygon) - 1):
            total += Rational(abs(_det3(polygon[0], polygon[i], polygon[i + 1])), 6)
    return total


def mixed_covolume_table(ideals: Sequence[MonomialIdeal]) -> MultiplicityTable:
    """
    e-table read off the homogeneous polynomial 𝐦 ↦ covolume(∏ I_j^{m_j}),
    whose coefficient of 𝐦^𝐝 is e_𝐝 / ∏ d_i!.
    """
    if not ideals:
        raise PreconditionError("need at least one ideal")
    d = ideals[0].dimension
    s = len(ideals)
    grid = monomials_of_degree(s, d)
    values = [covolume(multi_power(ideals, point)) for point in grid]
    coefficients = solve_homogeneous(grid, values, d)
    return MultiplicityTable.from_coefficients(s, d, coefficients)


def scaled_staircase_body(F: "GradedFamily", n: int) -> List[Tuple[Rational, ...]]:
    """
    Vertices of (1/n)·(ℝ^d_{>=0} \\ NP(F_n)): the origin followed by the
    scaled vertices of NP(F_n).
    """
    if n < 1:
        raise PreconditionError(f"body index must be >= 1, got {n}")
    I = F.term(n)
    d = I.dimension
    if d > 3:
        raise UnsupportedDimensionError(f"unsupported dimension for staircase bodies: d={d}")
    if not is_m_primary(I):
        raise PreconditionError(f"term {n} of {F.label()} is not m-primary")
    origin = tuple(Rational(0) for _ in range(d))
    if I.is_unit:
        return [origin]
    vertices = []
    for g in I.generators:
        others = [h for h in I.generators if h != g]
        if not others or not np_membership(normalize(I.ring, others), 1, g):
            vertices.append(g)
    vertices.sort(reverse=True)
    return [origin] + [tuple(Rational(v, n) for v in g) for g in vertices]
