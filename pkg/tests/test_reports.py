from sympy import Rational

from gradmult.reports import (
    CheckReport,
    Verdict,
    approx_str,
    combine_verdicts,
    compare_entrywise,
    compare_values,
    ideal_to_json,
    rational_str,
    subset_to_json,
    type_key,
    within_tolerance,
)


def test_rational_strings():
    assert rational_str(Rational(6, 4)) == "3/2"
    assert rational_str(5) == "5"
    assert approx_str(Rational(1, 4), 4) == "0.2500"


def test_type_key_and_ideal_json(ring2, ideal):
    assert type_key((2,)) == "2"
    assert type_key((1, 0, 1)) == "1,0,1"
    assert ideal_to_json(ideal(ring2, (0, 3), (2, 0))) == [[0, 3], [2, 0]]


def test_subsets_serialize_as_sorted_names(ring3):
    assert subset_to_json(ring3, {2, 0}) == ["x", "z"]
    assert subset_to_json(ring3, frozenset()) == []


def test_tolerance_is_relative_above_one():
    tol = Rational(1, 20)
    assert within_tolerance(Rational(104), Rational(100), tol)
    assert not within_tolerance(Rational(106), Rational(100), tol)
    assert within_tolerance(Rational(1, 25), Rational(0), tol)


def test_compare_values():
    assert compare_values(Rational(1, 2), Rational(1, 2), True, Rational(1, 20)) == (True, Verdict.PASS)
    assert compare_values(Rational(65, 128), Rational(1, 2), True, Rational(1, 20)) == (False, Verdict.FAIL)
    assert compare_values(Rational(65, 128), Rational(1, 2), False, Rational(1, 20)) == (True, Verdict.EVIDENCE_ONLY)


def test_combine_verdicts():
    assert combine_verdicts([Verdict.PASS, Verdict.EVIDENCE_ONLY]) == Verdict.EVIDENCE_ONLY
    assert combine_verdicts([Verdict.EVIDENCE_ONLY, Verdict.FAIL]) == Verdict.FAIL
    assert combine_verdicts([Verdict.PASS]) == Verdict.PASS


def test_compare_entrywise_lists_every_mismatch():
    report = compare_entrywise("demo", {}, {(1, 0): 1, (0, 1): 2}, {(1, 0): 1, (0, 1): 3}, True, Rational(1, 20))
    assert report.verdict == Verdict.FAIL
    assert report.witnesses == [{"type": "0,1", "lhs": "2", "rhs": "3"}]
    assert report.mode == "exact"


def test_compare_entrywise_treats_missing_keys_as_zero():
    report = compare_entrywise("demo", {}, {(2,): 0}, {}, True, Rational(1, 20))
    assert report.verdict == Verdict.PASS
    assert report.rhs == {"2": "0"}


def test_report_to_dict():
    report = CheckReport("graded", {"horizon": 3}, Verdict.SKIPPED, notes=["n"])
    payload = report.to_dict()
    assert payload["verdict"] == "skipped"
    assert payload["mode"] == "exact"
    assert set(payload) == {"name", "instance", "verdict", "mode", "lhs", "rhs", "witnesses", "notes"}
    assert not report.failed
