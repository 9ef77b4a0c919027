import random
from math import comb

import numpy as np
import pytest

from gradmult.errors import InfiniteColengthError, PreconditionError
from gradmult.lattice_length import (
    colength,
    count_outside,
    default_certificate,
    localized_length,
    module_colength,
    naive_colength,
    relative_length,
)
from gradmult.monomial_core import (
    AmbientRing,
    MonomialIdeal,
    contains,
    ideal_sum,
    maximal_ideal,
    normalize,
    power,
    product,
    pure_power_exponents,
)


def _random_m_primary(rng, ring):
    d = ring.dimension
    points = []
    for i in range(d):
        points.append(tuple(rng.randint(1, 6) if j == i else 0 for j in range(d)))
    for _ in range(rng.randint(0, 5)):
        points.append(tuple(rng.randint(0, 6) for _ in range(d)))
    return normalize(ring, [p for p in points if any(p)])


def test_colength_matches_full_box_scan():
    rng = random.Random(20240611)
    rings = {2: AmbientRing(("x", "y")), 3: AmbientRing(("x", "y", "z"))}
    for _ in range(200):
        ring = rings[rng.choice((2, 3))]
        I = _random_m_primary(rng, ring)
        upper = [b - 1 for b in pure_power_exponents(I)]
        assert colength(I) == naive_colength(I, upper), str(I)


def test_colength_examples(ring2, ideal):
    assert colength(ideal(ring2, (2, 0), (0, 3))) == 6
    assert colength(ideal(ring2, (3, 0), (1, 1), (0, 3))) == 5
    assert colength(MonomialIdeal.unit(ring2)) == 0


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_colength_of_maximal_powers(ring2, ring3, n):
    assert colength(power(maximal_ideal(ring2), n)) == comb(n + 1, 2)
    assert colength(power(maximal_ideal(ring3), n)) == comb(n + 2, 3)


def test_colength_requires_m_primary(ring2, ideal):
    with pytest.raises(InfiniteColengthError):
        colength(ideal(ring2, (1, 1)))


def test_count_outside_one_variable():
    ring = AmbientRing(("t",))
    assert count_outside(normalize(ring, [(3,)]), [10]) == 3
    assert count_outside(normalize(ring, [(3,)]), [1]) == 2


def test_module_colength(ring2, m2, ideal):
    Q = ideal(ring2, (1, 1))
    assert module_colength(Q, power(m2, 3)) == 5
    assert module_colength(None, power(m2, 3)) == 6


def test_relative_length(ring2, m2, ideal):
    assert relative_length(ideal(ring2, (1, 0)), m2) == 1
    assert relative_length(MonomialIdeal.unit(ring2), ideal(ring2, (2, 0), (0, 3))) == 6
    assert relative_length(ideal(ring2), m2) == 0


def test_relative_length_certificate(ring2, m2, ideal):
    J = ideal(ring2, (1, 0))
    I = power(m2, 2)
    assert default_certificate(I) == 4
    assert relative_length(J, I, certificate_c=2) == relative_length(J, I)
    with pytest.raises(PreconditionError):
        relative_length(J, I, certificate_c=1)


def test_localized_length(ring2, ideal):
    Q = ideal(ring2, (2, 1))
    assert localized_length(Q, {0}) == 2
    assert localized_length(Q, {1}) == 1
    with pytest.raises(PreconditionError):
        localized_length(Q, {0, 1})


def _random_ideal(rng, ring):
    d = ring.dimension
    points = [tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(rng.randint(1, 3))]
    return normalize(ring, [p for p in points if any(p)] or [(1,) + (0,) * (d - 1)])


def _points_between(J, IJ, upper):
    grid = np.indices(tuple(u + 1 for u in upper)).reshape(len(upper), -1).T
    return sum(1 for point in grid.tolist() if contains(J, point) and not contains(IJ, point))


@pytest.mark.parametrize("seed", range(10))
def test_relative_length_is_a_difference_of_colengths(seed):
    rng = random.Random(seed)
    ring = AmbientRing(("x", "y")) if seed % 2 else AmbientRing(("x", "y", "z"))
    top = 4 if ring.dimension == 2 else 3
    I = _random_m_primary_small(rng, ring, top)
    J = _random_m_primary_small(rng, ring, top)
    IJ = product(I, J)
    assert relative_length(J, I) == colength(IJ) - colength(J)
    upper = [b - 1 for b in pure_power_exponents(IJ)]
    assert relative_length(J, I) == naive_colength(IJ, upper) - naive_colength(J, upper)


@pytest.mark.parametrize("seed", range(10))
def test_relative_length_of_non_primary_ideals_matches_scan(seed):
    rng = random.Random(50 + seed)
    ring = AmbientRing(("x", "y"))
    I = _random_m_primary_small(rng, ring, 3)
    J = _random_ideal(rng, ring)
    IJ = product(I, J)
    upper = [int(v) + sum(pure_power_exponents(I)) + 1 for v in J.as_array().max(axis=0)]
    assert relative_length(J, I) == _points_between(J, IJ, upper)


@pytest.mark.parametrize("seed", range(10))
def test_colength_is_monotone(seed):
    rng = random.Random(100 + seed)
    ring = AmbientRing(("x", "y")) if seed % 2 else AmbientRing(("x", "y", "z"))
    I = _random_m_primary(rng, ring)
    larger = ideal_sum(I, _random_ideal(rng, ring))
    assert colength(I) >= colength(larger)
    upper = [b - 1 for b in pure_power_exponents(I)]
    assert colength(larger) == naive_colength(larger, upper)


def _random_m_primary_small(rng, ring, top):
    d = ring.dimension
    points = [tuple(rng.randint(1, top) if j == i else 0 for j in range(d)) for i in range(d)]
    points += [tuple(rng.randint(0, top) for _ in range(d)) for _ in range(rng.randint(0, 2))]
    return normalize(ring, [p for p in points if any(p)])
