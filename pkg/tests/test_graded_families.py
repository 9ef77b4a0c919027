import pytest

from gradmult.errors import NotSquarefreeError, PreconditionError
from gradmult.graded_families import (
    IntegralClosurePowers,
    Powers,
    ProductFamily,
    Restricted,
    Saturation,
    Scaled,
    SymbolicPowers,
    TableFamily,
    Truncated,
    Veronese,
    common_period,
    linear_growth_report,
    linear_growth_search,
    noetherian_period,
    product_of_families,
    setup_growth_report,
    verify_filtration,
    verify_graded,
)
from gradmult.monomial_core import contains, maximal_ideal, power, product, saturate
from gradmult.reports import Verdict


def test_powers_and_unit_term(m2):
    F = Powers(m2)
    assert F.term(0).is_unit
    assert F.term(3) == power(m2, 3)
    with pytest.raises(PreconditionError):
        F.term(-1)


def test_scaled_terms(m2):
    F = Scaled(m2, 2)
    assert F.term(1) == m2
    assert F.term(3) == power(m2, 2)
    assert F.term(4) == power(m2, 2)
    with pytest.raises(PreconditionError):
        Scaled(m2, 0)


def test_truncation_is_generated_by_the_first_terms(ring2, m2, ideal):
    base = Saturation(Powers(ideal(ring2, (2, 0), (1, 1))))
    F = Truncated(1, base)
    assert F.term(1) == base.term(1)
    assert F.term(3) == power(base.term(1), 3)
    assert Truncated(3, base).term(3) == base.term(3)


def test_saturation_family(ring2, ideal):
    F = Saturation(Powers(ideal(ring2, (2, 0), (1, 1))))
    assert F.term(1) == ideal(ring2, (1, 0))
    assert F.term(4) == ideal(ring2, (4, 0))


def test_symbolic_powers_of_the_triangle(ring3, ideal):
    Q = ideal(ring3, (1, 1, 0), (0, 1, 1), (1, 0, 1))
    F = SymbolicPowers(Q)
    assert F.term(1) == Q
    assert contains(F.term(2), (1, 1, 1))
    assert not contains(power(Q, 2), (1, 1, 1))
    with pytest.raises(NotSquarefreeError):
        SymbolicPowers(ideal(ring3, (2, 0, 0)))


def test_integral_closure_family(ring2, ideal):
    F = IntegralClosurePowers(ideal(ring2, (2, 0), (0, 2)))
    assert F.term(1) == ideal(ring2, (2, 0), (1, 1), (0, 2))


def test_product_and_table_families(ring2, m2, ideal):
    J = ideal(ring2, (2, 0), (0, 3))
    P = ProductFamily(Powers(m2), Powers(J))
    assert P.term(2) == product(power(m2, 2), power(J, 2))
    assert product_of_families([Powers(m2)]).term(2) == power(m2, 2)
    T = TableFamily([m2, power(m2, 3)])
    assert T.term(2) == power(m2, 3)
    assert T.term(3) == power(m2, 4)


def test_restricted_family(ring3):
    F = Restricted(Powers(maximal_ideal(ring3)), {0})
    assert F.ring.variables == ("y", "z")
    assert F.term(2) == power(maximal_ideal(F.ring), 2)
    assert F.describe()["kill"] == ["x"]


def test_veronese_family(m2):
    F = Veronese(Scaled(m2, 2), 2)
    assert F.term(3) == power(m2, 3)
    with pytest.raises(PreconditionError):
        Veronese(Powers(m2), 0)


def test_verify_graded(ring2, m2, ideal):
    assert verify_graded(Powers(m2), 6).verdict == Verdict.PASS
    broken = TableFamily([m2, ideal(ring2, (3, 0), (0, 3))])
    report = verify_graded(broken, 2)
    assert report.verdict == Verdict.FAIL
    assert report.witnesses == [{"n": 1, "m": 1}]
    assert report.notes == ["evidence at horizon 2"]


def test_verify_filtration(m2):
    assert verify_filtration(Powers(m2), 5).verdict == Verdict.PASS
    report = verify_filtration(TableFamily([power(m2, 2), m2]), 2)
    assert report.verdict == Verdict.FAIL
    assert report.witnesses == [{"n": 1}]


def test_linear_growth_of_saturation_pair(ring2, ideal):
    I = Powers(ideal(ring2, (2, 0), (1, 1)))
    witness = linear_growth_search(Saturation(I), I, 8, 12)
    assert witness is not None
    assert witness.c == 2
    assert witness.horizon == 12


def test_linear_growth_negative_control(ring2, ideal):
    J = Powers(ideal(ring2, (1, 0)))
    I = Powers(ideal(ring2, (2, 0)))
    assert linear_growth_search(J, I, 8, 6) is None
    assert linear_growth_report(J, I, 8, 6).verdict == Verdict.FAIL


def test_linear_growth_requires_containment(ring2, ideal):
    with pytest.raises(PreconditionError):
        linear_growth_search(Powers(ideal(ring2, (2, 0))), Powers(ideal(ring2, (1, 0))), 4, 3)


def test_setup_growth_report(ring2, ideal):
    I = Powers(ideal(ring2, (2, 0), (1, 1)))
    report = setup_growth_report(Saturation(I), I, 8, 8, [1, 2])
    assert report.verdict == Verdict.EVIDENCE_ONLY
    assert [row["p"] for row in report.rhs] == [1, 2]
    assert all(row["c"] is not None and row["c"] <= row["bound"] for row in report.rhs)


def test_noetherian_periods(ring3, m2, ideal):
    assert noetherian_period(Powers(m2), 12, 24) == 1
    assert noetherian_period(Scaled(m2, 2), 12, 24) == 2
    triangle = ideal(ring3, (1, 1, 0), (0, 1, 1), (1, 0, 1))
    assert noetherian_period(SymbolicPowers(triangle), 12, 12) == 2
    assert common_period([Powers(m2), Scaled(m2, 3)], 12, 24) == 3


def test_saturation_of_powers_is_noetherian(ring2, ideal):
    F = Saturation(Powers(ideal(ring2, (2, 0), (1, 1))))
    assert noetherian_period(F, 12, 12) == 1
    assert saturate(F.term(1)) == F.term(1)
