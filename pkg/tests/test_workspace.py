import pytest

from gradmult.errors import WorkspaceError
from gradmult.graded_families import Powers, ProductFamily, Restricted, Scaled
from gradmult.monomial_core import maximal_ideal, normalize, power
from gradmult.reports import ideal_to_json
from gradmult.workspace import parse_ideal, parse_workspace, parse_workspace_data


def _doc(**extra):
    data = {
        "schema": "gradmult/1",
        "ring": {"variables": ["x", "y"]},
        "ideals": {"M": [[1, 0], [0, 1]], "I": [[2, 0], [0, 3]]},
        "families": {"F": {"kind": "powers", "ideal": "I"}},
    }
    data.update(extra)
    return data


def test_minimal_workspace(ring2):
    doc = parse_workspace_data(_doc())
    assert doc.ring == ring2
    assert doc.ideal("M") == maximal_ideal(ring2)
    assert isinstance(doc.family("F"), Powers)
    assert doc.family("F").name == "F"
    assert doc.quotient is None


def test_workspace_from_file(write_json, ring2):
    doc = parse_workspace(write_json("ws.json", _doc()))
    assert doc.family("F").term(2) == normalize(ring2, [(4, 0), (2, 3), (0, 6)])


def test_unknown_names_raise(ring2):
    doc = parse_workspace_data(_doc())
    with pytest.raises(WorkspaceError):
        doc.ideal("nope")
    with pytest.raises(WorkspaceError):
        doc.family("nope")


def test_unknown_ideal_reference_reports_path():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(families={"F": {"kind": "powers", "ideal": "J"}}))
    assert info.value.path == "$.families.F.ideal"
    assert "unknown ideal reference 'J'" in str(info.value)


def test_arity_mismatch_reports_path():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(ideals={"I": [[2, 0], [0, 1, 1]]}))
    assert info.value.path == "$.ideals.I[1]"
    assert "expected 2 exponents, got 3" in str(info.value)


def test_cyclic_families():
    families = {
        "A": {"kind": "saturation", "base": "B"},
        "B": {"kind": "truncated", "a": 2, "base": "A"},
    }
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(families=families))
    assert "cyclic family definition: A -> B -> A" in str(info.value)


def test_schema_and_unknown_kind():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(schema="gradmult/9"))
    assert info.value.path == "$.schema"
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(families={"F": {"kind": "cubes", "ideal": "I"}}))
    assert info.value.path == "$.families.F.kind"


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"ring": {"variables": ["x"]},\n  "ideals": }', encoding="utf-8")
    with pytest.raises(WorkspaceError) as info:
        parse_workspace(str(path))
    assert "invalid JSON at line 2" in str(info.value)
    assert info.value.exit_code == 2


def test_missing_file(tmp_path):
    with pytest.raises(WorkspaceError) as info:
        parse_workspace(str(tmp_path / "absent.json"))
    assert info.value.kind == "workspace"


def test_duplicate_keys(tmp_path):
    path = tmp_path / "dup.json"
    path.write_text('{"ring": {"variables": ["x"]}, "ideals": {"I": [[1]], "I": [[2]]}}', encoding="utf-8")
    with pytest.raises(WorkspaceError) as info:
        parse_workspace(str(path))
    assert "duplicate key 'I'" in str(info.value)


def test_name_clash_between_ideal_and_family():
    with pytest.raises(WorkspaceError):
        parse_workspace_data(_doc(families={"I": {"kind": "powers", "ideal": "I"}}))


def test_inline_ideals_and_families(ring2):
    families = {
        "S": {"kind": "scaled", "ideal": [[1, 0], [0, 1]], "alpha": 2},
        "V": {"kind": "veronese", "base": {"kind": "powers", "ideal": "M"}, "k": 3},
    }
    doc = parse_workspace_data(_doc(families=families))
    assert isinstance(doc.family("S"), Scaled)
    assert doc.family("V").term(1) == power(maximal_ideal(ring2), 3)


def test_veronese_step_must_be_positive():
    families = {"V": {"kind": "veronese", "base": {"kind": "powers", "ideal": "M"}, "k": 0}}
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(families=families))
    assert info.value.path == "$.families.V.k"


def test_product_factors(ring2):
    families = {
        "F": {"kind": "powers", "ideal": "I"},
        "P": {"kind": "product", "factors": ["F", {"kind": "powers", "ideal": "M"}]},
        "Q": {"kind": "product", "factors": ["F"]},
    }
    doc = parse_workspace_data(_doc(families=families))
    assert isinstance(doc.family("P"), ProductFamily)
    assert doc.family("P").name == "P"
    assert doc.family("Q") is doc.family("F")
    assert doc.family("F").name == "F"


def test_restricted_kill():
    families = {"R": {"kind": "restricted", "base": {"kind": "powers", "ideal": "M"}, "kill": ["x"]}}
    doc = parse_workspace_data(_doc(families=families))
    family = doc.family("R")
    assert isinstance(family, Restricted)
    assert family.ring.variables == ("y",)
    with pytest.raises(WorkspaceError) as info:
        parse_workspace_data(_doc(families={"R": {"kind": "restricted", "base": "F", "kill": ["w"]}}))
    assert info.value.path == "$.families.R.kill"


def test_dimension_only_ring_and_quotient():
    doc = parse_workspace_data({"ring": {"dimension": 3, "quotient": [[1, 1, 0]]}})
    assert doc.ring.variables == ("x", "y", "z")
    assert doc.quotient == normalize(doc.ring, [(1, 1, 0)])
    doc = parse_workspace_data({"ring": {"dimension": 4}})
    assert doc.ring.variables == ("x1", "x2", "x3", "x4")


def test_settings_are_validated():
    doc = parse_workspace_data(_doc(settings={"q_max": 4}))
    assert doc.engine_settings().q_max == 4
    with pytest.raises(WorkspaceError):
        parse_workspace_data(_doc(settings={"q_max": "lots"}))


def test_parse_ideal_reads_serialized_ideals(ring2, ideal):
    I = ideal(ring2, (3, 0), (1, 1), (0, 3))
    assert parse_ideal(ring2, ideal_to_json(I), "$") == I
