import csv
import json
import runpy
import sys

import pytest

from gradmult.cli import main

WORKSPACE = {
    "schema": "gradmult/1",
    "ring": {"variables": ["x", "y"]},
    "ideals": {
        "M": [[1, 0], [0, 1]],
        "I": [[2, 0], [0, 3]],
        "X": [[1, 0]],
        "P": [[2, 0], [1, 1]],
    },
    "families": {
        "FM": {"kind": "powers", "ideal": "M"},
        "FI": {"kind": "powers", "ideal": "I"},
        "FX": {"kind": "powers", "ideal": "X"},
        "S": {"kind": "scaled", "ideal": "M", "alpha": 2},
        "PP": {"kind": "powers", "ideal": "P"},
        "SAT": {"kind": "saturation", "base": "PP"},
        "B": {"kind": "table", "terms": ["M", [[3, 0], [0, 3]]]},
    },
}


@pytest.fixture
def ws(write_json):
    return write_json("ws.json", WORKSPACE)


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_colength_and_multiplicity(capsys, ws):
    code, payload = _run(capsys, ["colength", "-w", ws, "--ideal", "I"])
    assert code == 0
    assert payload["colength"] == "6"
    code, payload = _run(capsys, ["multiplicity", "-w", ws, "--ideal", "I"])
    assert code == 0
    assert payload["e"] == "6"
    assert payload["degree"] == 2


def test_module_multiplicity(capsys, write_json):
    data = dict(WORKSPACE, ring={"variables": ["x", "y"], "quotient": [[1, 1]]})
    code, payload = _run(capsys, ["multiplicity", "-w", write_json("q.json", data), "--ideal", "M"])
    assert code == 0
    assert payload["degree"] == 1
    assert payload["e"] == "2"


def test_family_mixed_with_csv(capsys, ws, tmp_path):
    out = tmp_path / "table.csv"
    code, payload = _run(capsys, ["family-mixed", "-w", ws, "--families", "FM,S", "--csv", str(out)])
    assert code == 0
    assert payload["entries"] == {"2,0": "1", "1,1": "1/2", "0,2": "1/4"}
    with open(out, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows == [["type", "e"], ["2,0", "1"], ["1,1", "1/2"], ["0,2", "1/4"]]


def test_vol_mult(capsys, ws):
    code, payload = _run(capsys, ["vol-mult", "-w", ws, "--families", "S", "--type", "2", "--p", "2,4,8"])
    assert code == 0
    assert payload["verdict"] == "pass"
    assert payload["lhs"]["ratios"] == [[2, "1/4"], [4, "1/4"], [8, "1/4"]]
    assert payload["rhs"]["limit"] == "1/4"


def test_family_value_in_sequence_mode(capsys, ws):
    code, payload = _run(capsys, ["family-value", "-w", ws, "--families", "FM", "--point", "1",
                                  "--strategy", "sequence", "--horizon", "8"])
    assert code == 0
    assert payload["value"] == "9/16"
    assert payload["mode"] == "sequence"
    assert "approx" in payload


def test_newton_covolume(capsys, ws):
    code, payload = _run(capsys, ["newton", "-w", ws, "--ideal", "I", "--covolume"])
    assert code == 0
    assert payload["covolume"] == "3"
    assert payload["e"] == "6"


def test_check_minkowski(capsys, ws):
    code, payload = _run(capsys, ["check", "minkowski", "-w", ws, "--families", "FM,FI"])
    assert code == 0
    assert payload["verdict"] == "pass"


def test_failed_check_exits_one(capsys, ws):
    code, payload = _run(capsys, ["check", "graded", "-w", ws, "--family", "B", "--horizon", "2"])
    assert code == 1
    assert payload["verdict"] == "fail"


def test_strict_turns_evidence_into_failure(capsys, ws):
    argv = ["check", "linear-growth", "-w", ws, "--larger", "SAT", "--smaller", "PP", "--horizon", "6"]
    code, payload = _run(capsys, argv)
    assert code == 0
    assert payload["verdict"] == "evidence-only"
    assert payload["lhs"]["c"] == 2
    code, _ = _run(capsys, argv + ["--strict"])
    assert code == 1


def test_double_limit(capsys, ws):
    code, payload = _run(capsys, ["check", "double-limit", "-w", ws, "--primary-families", "FM",
                                  "--families", "FX", "--m", "1", "--n", "1"])
    assert code == 0
    assert payload["rhs"]["limit"] == "1/2"
    assert payload["verdict"] == "evidence-only"


def test_double_limit_of_a_scaled_family(capsys, ws):
    code, payload = _run(capsys, ["check", "double-limit", "-w", ws, "--primary-families", "S", "--m", "1"])
    assert code == 0
    assert payload["rhs"]["limit"] == "1/8"
    assert payload["lhs"]["table"][-1][:3] == [8, 8, "33/256"]
    assert payload["verdict"] == "evidence-only"
    assert payload["notes"] == ["period 2"]


def test_missing_workspace(capsys, tmp_path):
    code, payload = _run(capsys, ["colength", "-w", str(tmp_path / "absent.json"), "--ideal", "I"])
    assert code == 2
    assert payload["kind"] == "workspace"


@pytest.mark.parametrize("argv", [
    ["colength", "--ideal"],
    ["check", "graded"],
    ["frobnicate"],
])
def test_usage_errors(capsys, ws, argv):
    code, payload = _run(capsys, argv[:1] + ["-w", ws] + argv[1:])
    assert code == 2
    assert payload["kind"] == "usage"


def test_output_is_deterministic(capsys, ws):
    argv = ["family-mixed", "-w", ws, "--families", "FM,FI"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_report_suite_and_store(capsys, ws, write_json, tmp_path):
    suite = write_json("suite.json", {"items": [
        {"name": "graded", "argv": ["check", "graded", "--family", "FM", "--horizon", "4"]},
        ["check", "filtration", "--family", "FM", "--horizon", "4"],
        ["colength", "--ideal", "nope"],
    ]})
    store = str(tmp_path / "reports.db")
    code, payload = _run(capsys, ["report", "-w", ws, "--suite", suite, "--store", store, "--run-id", "r1"])
    assert code == 1
    assert [item["status"] for item in payload["items"]] == ["pass", "pass", "error"]
    assert payload["summary"] == {"pass": 2, "error": 1}

    code, payload = _run(capsys, ["store-list", "--store", store])
    assert code == 0
    assert [row["name"] for row in payload["reports"]] == ["filtration", "graded"]
    assert all(row["run_id"] == "r1" for row in payload["reports"])


def test_module_invocation(capsys, ws, monkeypatch):
    monkeypatch.setattr(sys, "argv", ["gradmult", "colength", "-w", ws, "--ideal", "I"])
    with pytest.raises(SystemExit) as info:
        runpy.run_module("gradmult", run_name="__main__")
    assert info.value.code == 0
    assert json.loads(capsys.readouterr().out)["colength"] == "6"
