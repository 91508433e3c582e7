import json

import pytest

from pvmaster.cli import run


def test_eval_prints_one_number(capsys):
    assert run(["eval", "--theorem", "1", "--f", "exp", "--alpha", "0", "--beta", "1", "--theta", "1", "--n", "0", "--mode", "audited"]) == 0
    out = capsys.readouterr().out.split()
    assert len(out) == 1
    assert float(out[0]) == pytest.approx(4.0208710345679428, abs=1e-13)


def test_eval_check(capsys):
    assert run(["eval", "--theorem", "1", "--f", "exp", "--theta", "1", "--check"]) == 0
    value, oracle, diff = capsys.readouterr().out.split()
    assert oracle.startswith("oracle=") and diff.startswith("diff=")
    assert float(diff[5:]) < 1e-6


def test_eval_theta_grid(capsys):
    assert run(["eval", "--kernel", "cos_odd", "--theta", "0.5", "--theta", "1", "--n", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_eval_other_formulas(capsys):
    assert run(["eval", "--example", "2", "--theta", "1", "--b", "1"]) == 0
    assert run(["eval", "--generator", "gen64", "--theta", "1", "--n", "1", "--alpha", "0.3", "--beta", "0.5"]) == 0
    assert run(["eval", "--table1-row", "1", "--coeff", "0.3", "--coeff", "1", "--theta", "1", "--n", "1"]) == 0
    assert run(["eval", "--table2-row", "2", "--f", "power", "--fparam", "m=1", "--theta", "1"]) == 0
    assert run(["eval", "--remark", "--f", "exp", "--beta", "0.5", "--theta", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["eval", "--theorem", "9", "--theta", "1"],
        ["eval", "--theorem", "1", "--theta", "1"],
        ["eval", "--theorem", "1", "--f", "log1p", "--theta", "1"],
        ["eval", "--theorem", "1", "--f", "exp", "--theta", "1", "--bogus"],
        ["verify", "--suite", "no-such-suite"],
        ["audit", "--formula", "thm9"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_verify_smoke(tmp_path):
    out = tmp_path / "report.json"
    assert run(["verify", "--suite", "smoke", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["summary"]["pass"] == 12 and len(report["cases"]) == 12


def test_verify_failures_exit_one(tmp_path):
    suite = tmp_path / "s.json"
    suite.write_text(json.dumps({"mode": "printed", "cases": [{"kind": "theorem", "id": 2, "f": {"name": "power", "params": {"m": 1}}, "theta": 1, "n": 0}]}))
    assert run(["verify", "--suite", str(suite), "--out", str(tmp_path / "r.json")]) == 1


def test_malformed_suite_leaves_no_file(tmp_path):
    suite = tmp_path / "s.json"
    suite.write_text(json.dumps({"cases": [{"kind": "theorem", "id": 1, "theta": 1}]}))
    out = tmp_path / "r.json"
    assert run(["verify", "--suite", str(suite), "--out", str(out)]) == 2
    assert not out.exists()
    assert list(tmp_path.iterdir()) == [suite]


def test_bad_json_suite(tmp_path):
    suite = tmp_path / "s.json"
    suite.write_text("{not json")
    assert run(["verify", "--suite", str(suite)]) == 2


def test_round_trip_eval_verify(tmp_path, capsys):
    run(["eval", "--theorem", "5", "--f", "exp", "--alpha", "0.3", "--beta", "0.5", "--theta", "1.3", "--n", "1", "--m", "2"])
    printed = capsys.readouterr().out.strip()
    suite = tmp_path / "s.json"
    suite.write_text(json.dumps({"cases": [{"kind": "theorem", "id": 5, "f": {"name": "exp"}, "alpha": 0.3, "beta": 0.5, "theta": 1.3, "n": 1, "m": 2}]}))
    out = tmp_path / "r.json"
    assert run(["verify", "--suite", str(suite), "--out", str(out)]) == 0
    assert float(printed) == json.loads(out.read_text())["cases"][0]["closed_audited"]


def test_identities_command(capsys):
    assert run(["identities"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5 and all(" pass " in line for line in lines)


def test_audit_command(capsys):
    assert run(["audit", "--formula", "thm2", "--formula", "eq22"]) == 0
    out = capsys.readouterr().out
    assert "thm2   sigma=-1 consistent" in out
    assert run(["audit", "--formula", "thm1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["sigma"] == 1
