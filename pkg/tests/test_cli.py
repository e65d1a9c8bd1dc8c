import json

import pytest

from pivotforge import cli


def run_cli(args):
    return cli.main(args)


def test_run_writes_trajectory_and_summary(tmp_path, capsys):
    out = tmp_path / "traj.json"
    code = run_cli(["run", "--n", "4", "--rule", "lowest-index", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "n=4 rule=lowest-index iterations=15 final=8 value=15/1" in printed
    data = json.loads(out.read_text())
    assert data["iterations"] == 15
    assert data["final"]["vertex_id"] == 8
    assert data["final"]["objective_value"] == "15/1"
    assert len(data["records"]) == 15


def test_run_is_byte_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run_cli(["run", "--n", "5", "--rule", "random", "--seed", "11",
                 "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_run_padding(tmp_path, capsys):
    out = tmp_path / "pad.json"
    code = run_cli(["run", "--n", "4", "--pad-to", "12", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "iterations=15" in printed and "pad_to=12" in printed
    assert json.loads(out.read_text())["n"] == 12


def test_run_engine_error_exits_nonzero(tmp_path, capsys):
    out = tmp_path / "t.json"
    code = run_cli(["run", "--n", "3", "--max-iter", "1", "--out", str(out)])
    assert code == 1
    assert "outcome=error" in capsys.readouterr().out
    assert json.loads(out.read_text())["stop_reason"] == "max_iter_exceeded"


def test_run_csv_summary(tmp_path):
    out = tmp_path / "run.csv"
    run_cli(["run", "--n", "3", "--format", "csv", "--approx", "--out", str(out)])
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,rule,iterations,final_vertex_id,final_value,final_value_approx_lossy"
    assert lines[1] == "3,lowest-index,7,4,7/1,7.0"


def test_verify_checks_pass(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for check, n in [("uniqueness", "6"), ("gradient", "5"), ("path", "6"),
                     ("constancy", "5"), ("uso", "5"), ("sink", "8")]:
        assert run_cli(["verify", check, "--n", n]) == 0
        assert "result=pass" in capsys.readouterr().out
    assert run_cli(["verify", "equivalence", "--n", "5", "--trials", "20",
                    "--seed", "3"]) == 0
    assert run_cli(["verify", "sat", "--trials", "30", "--seed", "3"]) == 0
    capsys.readouterr()


def test_verify_failure_emits_witness_json(capsys, monkeypatch):
    monkeypatch.setitem(
        cli.VERIFY_HANDLERS, "uso",
        (lambda args: (False, {"face": ["*"], "sinks": []}), "face-scan"),
    )
    code = run_cli(["verify", "uso", "--n", "2"])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["check"] == "uso"
    assert payload["result"] == "fail"
    assert payload["witness"]["face"] == ["*"]


def test_verify_help_names_each_claim(capsys):
    with pytest.raises(SystemExit) as err:
        run_cli(["verify", "--help"])
    assert err.value.code == 0
    text = capsys.readouterr().out
    for check in cli.CHECK_CLAIMS:
        assert check in text
    assert "Hamiltonian path" in text


def test_caps_and_override(monkeypatch, capsys):
    with pytest.raises(SystemExit) as err:
        run_cli(["verify", "uso", "--n", "11"])
    assert err.value.code == 2
    monkeypatch.setenv("PIVOTFORGE_MAX_N", "3")
    with pytest.raises(SystemExit) as err:
        run_cli(["verify", "uniqueness", "--n", "5"])
    assert err.value.code == 2
    monkeypatch.setenv("PIVOTFORGE_MAX_N", "11")
    assert run_cli(["verify", "uniqueness", "--n", "5"]) == 0
    capsys.readouterr()


def test_export_polynomial_degrees(tmp_path, capsys):
    out = tmp_path / "p.json"
    run_cli(["export", "polynomial", "--n", "5", "--out", str(out)])
    assert "degree=5" in capsys.readouterr().out
    run_cli(["export", "polynomial", "--n", "2", "--out", str(out)])
    assert "degree=3" in capsys.readouterr().out
    data = json.loads(out.read_text())
    assert data["total_degree"] == 3
    assert all("/" in term["coefficient"] for term in data["terms"])


def test_export_path_and_orientation(tmp_path, capsys):
    path_file = tmp_path / "path.json"
    run_cli(["export", "path", "--n", "3", "--out", str(path_file)])
    assert json.loads(path_file.read_text()) == {
        "n": 3, "path": [0, 1, 3, 2, 6, 7, 5, 4]
    }
    orient_file = tmp_path / "orient.json"
    run_cli(["export", "orientation", "--n", "3", "--out", str(orient_file)])
    data = json.loads(orient_file.read_text())
    assert data["n"] == 3
    assert data["outgoing"]["4"] == []  # the optimum has no outgoing edges
    capsys.readouterr()


def test_reduce_round_trip(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("c demo\np cnf 3 1\n1 -2 3 0\n")
    out = tmp_path / "f.poly.json"
    code = run_cli(["reduce", str(cnf), "--check", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "degree=3" in printed
    assert "verdict=SAT max=0/1" in printed
    assert json.loads(out.read_text())["total_degree"] == 3


def test_reduce_unsat_verdict(tmp_path, capsys):
    cnf = tmp_path / "c.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    code = run_cli(["reduce", str(cnf), "--check"])
    assert code == 0
    assert "verdict=UNSAT max=-1/1" in capsys.readouterr().out


def test_reduce_parse_error_exits_2(tmp_path, capsys):
    cnf = tmp_path / "bad.cnf"
    cnf.write_text("p cnf 2 1\n1 3 0\n")
    code = run_cli(["reduce", str(cnf)])
    assert code == 2
    assert "line 2" in capsys.readouterr().err
    assert run_cli(["reduce", str(tmp_path / "missing.cnf")]) == 2
    capsys.readouterr()


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        run_cli(["run"])  # missing --n
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run_cli(["verify", "bogus"])
    assert err.value.code == 2
    capsys.readouterr()
