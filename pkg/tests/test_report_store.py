from gradmult.report_store import ReportStore
from gradmult.reports import CheckReport, Verdict


def _report(name, verdict=Verdict.PASS):
    return CheckReport(name, {"horizon": 4}, verdict, lhs={"2": "1"}, rhs={"2": "1"})


def test_save_and_fetch(tmp_path):
    store = ReportStore(str(tmp_path / "nested" / "reports.db"))
    first = store.save_report(_report("graded"))
    second = store.save_report(_report("minkowski", Verdict.FAIL), run_id="run-1")
    assert second > first
    rows = store.fetch_recent()
    assert [row["name"] for row in rows] == ["minkowski", "graded"]
    assert rows[0]["verdict"] == "fail"
    assert rows[0]["report"]["lhs"] == {"2": "1"}
    assert rows[1]["run_id"] is None
    store.close()


def test_fetch_by_run_id(tmp_path):
    store = ReportStore(str(tmp_path / "reports.db"))
    store.save_report(_report("graded"), run_id="a")
    store.save_report(_report("filtration"), run_id="b")
    store.save_report(_report("additivity"), run_id="a")
    rows = store.fetch_recent(run_id="a")
    assert [row["name"] for row in rows] == ["additivity", "graded"]
    assert len(store.fetch_recent(limit=1)) == 1
    store.close()


def test_reports_survive_reopening(tmp_path):
    path = str(tmp_path / "reports.db")
    store = ReportStore(path)
    store.save_report(_report("graded"))
    store.close()
    reopened = ReportStore(path)
    assert reopened.fetch_recent()[0]["mode"] == "exact"
    reopened.close()
