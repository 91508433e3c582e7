import json

import pytest

from conftest import comb, order
from pvmaster import verification as V
from pvmaster.analytic import DomainError, catalog_function
from pvmaster.suites import get_suite
from pvmaster.theorems import TheoremParams, theorem_value


@pytest.fixture(scope="module")
def smoke_report():
    return V.run_suite(get_suite("smoke"), jobs=1)


def test_series_oracle_matches_closed_form():
    f = catalog_function("exp", center=0.3)
    p = TheoremParams(5, f, comb(0.3, 0.5, 1.3), order(1, 2))
    assert V.series_oracle(p) == pytest.approx(theorem_value(p).value, abs=1e-10)


def test_series_oracle_log_inside_disc():
    p = TheoremParams(1, catalog_function("log1p"), comb(0.0, 0.5, 0.5), order(0))
    assert V.series_oracle(p) == pytest.approx(theorem_value(p).value, abs=1e-10)


def test_series_oracle_refuses_boundary():
    p = TheoremParams(1, catalog_function("log1p"), comb(), order(0), allow_boundary=True)
    with pytest.raises(DomainError):
        V.series_oracle(p)


def test_series_oracle_slow_convergence():
    # coefficients of ln(1+z) on |z| = 0.99 decay too slowly for K = 50
    p = TheoremParams(1, catalog_function("log1p"), comb(0.0, 0.99, 0.5), order(0))
    with pytest.raises(V.SeriesConvergenceError):
        V.series_oracle(p, K=50)


def test_smoke_suite(smoke_report):
    assert len(smoke_report["cases"]) == 12
    assert smoke_report["summary"] == {"pass": 12, "fail": 0, "unaudited": 0, "boundary": 0}
    ids = [c["case_id"] for c in smoke_report["cases"]]
    assert ids == sorted(ids)
    assert {e["formula_id"] for e in smoke_report["audit"]} >= {f"thm{i}" for i in range(1, 7)}


def test_printed_mode_flags_thm2():
    suite = {"mode": "printed", "cases": [{"kind": "theorem", "id": 2, "f": {"name": "power", "params": {"m": 1}}, "theta": 1.0, "n": 0}]}
    report = V.run_suite(suite, jobs=1)
    assert report["cases"][0]["status"] == "fail"
    suite["mode"] = "audited"
    assert V.run_suite(suite, jobs=1)["cases"][0]["status"] == "pass"


def test_empty_suite():
    report = V.run_suite({"cases": []}, jobs=1)
    assert report["cases"] == [] and report["audit"] == []
    assert report["summary"] == {"pass": 0, "fail": 0, "unaudited": 0, "boundary": 0}
    assert json.loads(V.emit_table(report, "json")) == {"audit": [], "cases": []}


def test_malformed_suite_rejected_before_running():
    suite = {"cases": [{"kind": "theorem", "id": 1, "f": {"name": "exp"}, "theta": 1.0}, {"kind": "theorem", "id": 7, "theta": 1.0}, {"kind": "nope"}]}
    with pytest.raises(V.SuiteValidationError) as exc:
        V.run_suite(suite, jobs=1)
    assert len(exc.value.problems) == 2


def test_duplicate_cases_rejected():
    case = {"kind": "kernel", "id": "cos_odd", "theta": 1.0, "n": 0}
    with pytest.raises(V.SuiteValidationError):
        V.expand_cases({"cases": [case, case]})


def test_theta_list_expands():
    descs = V.expand_cases({"cases": [{"kind": "kernel", "id": "cos_odd", "theta": [0.5, 1.0], "n": 0}]})
    assert [d["theta"] for d in descs] == [0.5, 1.0]


def test_deterministic_report(smoke_report):
    again = V.run_suite(get_suite("smoke"), jobs=1)
    assert V.report_json(again, include_timestamp=False) == V.report_json(smoke_report, include_timestamp=False)


def test_pass_rows_reverify(smoke_report):
    rec = smoke_report["cases"][0]
    single = V.run_suite({"cases": [rec["params"]]}, jobs=1)
    assert single["cases"][0]["status"] == "pass"
    assert single["cases"][0]["closed_audited"] == rec["closed_audited"]


def test_parallel_matches_serial(smoke_report):
    par = V.run_suite(get_suite("smoke"), jobs=2)
    assert V.report_json(par, include_timestamp=False) == V.report_json(smoke_report, include_timestamp=False)


def test_emit_csv_one_case():
    report = V.run_suite({"cases": [{"kind": "kernel", "id": "cos_odd", "theta": 1.0, "n": 0}]}, jobs=1)
    lines = V.emit_table(report, "csv").splitlines()
    assert len(lines) == 2
    assert lines[0] == ",".join(V.TABLE_COLUMNS)
    assert lines[1].endswith(",pass")


def test_emit_md(smoke_report):
    md = V.emit_table(smoke_report, "md")
    rows = md.splitlines()[2:]
    assert len(rows) == 12
    assert md == V.emit_table(smoke_report, "md")


def test_emit_unknown_format(smoke_report):
    with pytest.raises(ValueError):
        V.emit_table(smoke_report, "xlsx")


def test_tolerance_override():
    suite = {"tol": {"abs": 1e-30, "rel": 0.0}, "cases": [{"kind": "theorem", "id": 1, "f": {"name": "exp"}, "theta": 1.0, "n": 0}]}
    rec = V.run_suite(suite, jobs=1)["cases"][0]
    # the oracle error estimate still bounds the tolerance from below
    assert rec["tolerance"] >= 3 * rec["oracle_raw"]["error_estimate"]
