from math import factorial, prod

import pytest
from sympy import Rational

from gradmult.errors import FitNotStabilizedError, PreconditionError, SingularSystemError, StructuralCheckError
from gradmult.monomial_core import maximal_ideal, power, product
from gradmult.multiplicity_poly import (
    MultiplicityTable,
    check_no_pure_terms,
    evaluate_G,
    fit_numerical_function,
    general_mixed_multiplicities,
    mixed_multiplicities,
    solve_homogeneous,
)


@pytest.mark.parametrize("a", [1, 2, 3, 4])
@pytest.mark.parametrize("b", [1, 2, 3, 4])
def test_multiplicity_of_pure_power_ideals(ring2, ideal, a, b):
    table = mixed_multiplicities(None, [ideal(ring2, (a, 0), (0, b))])
    assert table[(2,)] == a * b


def test_mixed_table_of_maximal_and_pure_powers(ring2, m2, ideal):
    table = mixed_multiplicities(None, [m2, ideal(ring2, (2, 0), (0, 3))])
    assert table.entries == {(2, 0): 1, (1, 1): 2, (0, 2): 6}
    assert table.to_dict()["entries"] == {"2,0": "1", "1,1": "2", "0,2": "6"}


def test_multiplicity_is_power_invariant(ring2, ideal):
    I = ideal(ring2, (3, 0), (1, 1), (0, 3))
    assert mixed_multiplicities(None, [I])[(2,)] == 6
    assert mixed_multiplicities(None, [power(I, 2)])[(2,)] == 24


def test_module_multiplicity(ring2, m2, ideal):
    Q = ideal(ring2, (1, 1))
    assert mixed_multiplicities(Q, [m2], degree=1)[(1,)] == 2
    assert mixed_multiplicities(Q, [m2])[(2,)] == 0


def test_mixed_multiplicities_need_m_primary(ring2, ideal):
    with pytest.raises(PreconditionError):
        mixed_multiplicities(None, [ideal(ring2, (1, 0))])


def test_fit_recovers_a_polynomial():
    fit = fit_numerical_function(lambda p: p[0] ** 2 + 3 * p[0] * p[1] - 2, 2, 2)
    assert fit.stable
    assert fit.coefficients == {(2, 0): 1, (1, 1): 3, (0, 0): -2}
    assert fit.homogeneous_part(2) == {(2, 0): 1, (1, 1): 3}
    assert fit.evaluate((2, 1)) == 8


def test_fit_ignores_small_argument_noise():
    fit = fit_numerical_function(lambda p: p[0] ** 2 if p[0] < 6 else 2 * p[0], 1, 1, start=(2,))
    assert fit.coefficients == {(1,): 2}
    assert fit.offset[0] >= 6


def test_fit_reports_non_polynomial_functions():
    with pytest.raises(FitNotStabilizedError) as info:
        fit_numerical_function(lambda p: 2 ** p[0], 1, 1, cap=8)
    assert info.value.exit_code == 3
    assert len(info.value.to_dict()["fits"]) == 2


def test_solve_homogeneous():
    grid = [(2, 0), (1, 1), (0, 2)]
    assert solve_homogeneous(grid, [4, 2, 4], 2) == {(2, 0): 1, (1, 1): 0, (0, 2): 1}
    with pytest.raises(SingularSystemError):
        solve_homogeneous([(1, 1), (1, 1), (2, 0)], [1, 1, 1], 2)


def test_evaluate_G(ring2, m2, ideal):
    table = mixed_multiplicities(None, [m2, ideal(ring2, (2, 0), (0, 3))])
    assert evaluate_G(table, (1, 1)) == Rational(11, 2)
    assert evaluate_G(table, (1, 0)) == Rational(1, 2)


def test_general_mixed_multiplicities(ring2, m2, ideal):
    table = general_mixed_multiplicities(m2, [ideal(ring2, (1, 0))])
    assert table.general
    assert table.entries == {(1, 0): 1, (0, 1): 0}
    assert evaluate_G(table, (4, 7)) == 8
    assert evaluate_G(table, (0, 3)) == 0


def test_general_table_reduces_to_fixed_table_for_m_primary(ring2, m2, ideal):
    J = ideal(ring2, (2, 0), (0, 3))
    general = general_mixed_multiplicities(m2, [J])
    assert general.entries == {(1, 0): 1, (0, 1): 2}


def test_zero_table():
    table = MultiplicityTable.zero(2, 2)
    assert set(table.entries) == {(2, 0), (1, 1), (0, 2)}
    assert all(v == 0 for v in table.entries.values())


def test_pure_terms_are_rejected():
    check_no_pure_terms({(2, 0): Rational(1, 2), (1, 1): 1, (0, 2): 0})
    with pytest.raises(StructuralCheckError) as info:
        check_no_pure_terms({(2, 0): Rational(1, 2), (0, 2): Rational(3, 2)})
    assert "0,2: 3/2" in str(info.value)


PAIRS = [
    ([(1, 0), (0, 1)], [(2, 0), (0, 3)]),
    ([(3, 0), (1, 1), (0, 3)], [(1, 0), (0, 2)]),
    ([(2, 0), (0, 2)], [(4, 0), (1, 1), (0, 4)]),
    ([(1, 0), (0, 5)], [(3, 0), (0, 1)]),
]


@pytest.mark.parametrize("first,second", PAIRS)
def test_permuting_ideals_permutes_types(ring2, ideal, first, second):
    A, B = ideal(ring2, *first), ideal(ring2, *second)
    forward = mixed_multiplicities(None, [A, B])
    backward = mixed_multiplicities(None, [B, A])
    assert {t[::-1]: v for t, v in forward.entries.items()} == backward.entries


def test_permuting_three_ideals(ring2, m2, ideal):
    ideals = [m2, ideal(ring2, (2, 0), (0, 3)), ideal(ring2, (1, 0), (0, 2))]
    order = (2, 0, 1)
    base = mixed_multiplicities(None, ideals)
    permuted = mixed_multiplicities(None, [ideals[i] for i in order])
    for t, v in base.entries.items():
        assert permuted[tuple(t[i] for i in order)] == v


def _expanded_product_multiplicity(table, d):
    return sum(factorial(d) // prod(factorial(v) for v in t) * e for t, e in table.entries.items())


@pytest.mark.parametrize("first,second", PAIRS)
def test_multiplicity_of_a_product_expands_into_mixed_terms(ring2, ideal, first, second):
    A, B = ideal(ring2, *first), ideal(ring2, *second)
    table = mixed_multiplicities(None, [A, B])
    assert mixed_multiplicities(None, [product(A, B)])[(2,)] == _expanded_product_multiplicity(table, 2)


def test_product_expansion_in_three_variables(ring3, ideal):
    A = maximal_ideal(ring3)
    B = ideal(ring3, (1, 0, 0), (0, 1, 0), (0, 0, 2))
    table = mixed_multiplicities(None, [A, B])
    assert table[(3, 0)] == 1
    assert table[(0, 3)] == 2
    assert mixed_multiplicities(None, [product(A, B)])[(3,)] == _expanded_product_multiplicity(table, 3)
