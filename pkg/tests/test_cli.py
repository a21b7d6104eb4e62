from __future__ import annotations

import json
import subprocess
import sys

import pytest

from brieskorn_eta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_eta_brieskorn(capsys):
    code, out = run(capsys, "eta", "--n", "3", "--d", "5")
    rep = json.loads(out)
    assert code == 0 and rep["value"] == "-5/4"
    assert [s["step"] for s in rep["trace"]][0] == "fixed points"


def test_eta_plumbing(capsys):
    code, out = run(capsys, "eta", "--k", "2", "--d", "1")
    assert code == 0 and json.loads(out)["value"] == "-1/16"


def test_eta_parity_error(capsys):
    code, out = run(capsys, "eta", "--n", "4", "--d", "3")
    err = json.loads(out)["error"]
    assert code != 0 and err["command"] == "eta" and "odd" in err["message"]


def test_fixedpoints(capsys):
    code, out = run(capsys, "fixedpoints", "--n", "3", "--d", "3", "--epsilon", "1/8")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 3
    assert {p["modulus"] for p in rep["points"]} == {"1/2"}
    assert rep["permutation"]["full_cycle"]
    code, out = run(capsys, "fixedpoints", "--n", "3", "--d", "1", "--epsilon", "1/2")
    assert json.loads(out)["count"] == 1
    code, out = run(capsys, "fixedpoints", "--n", "3", "--d", "3", "--epsilon", "0")
    assert code != 0 and "error" in json.loads(out)


def test_classify_dim5(capsys):
    code, out = run(capsys, "classify", "--dim", "5", "--d-max", "51")
    rep = json.loads(out)
    assert code == 0
    assert rep["type_count_lower_bound"] == 4
    assert [f["residue"] for f in rep["families"]] == [1, 3, 5, 7]
    for f in rep["families"]:
        assert all(m % 16 in (f["residue"], 16 - f["residue"]) for m in f["members"])
    code, out = run(capsys, "classify", "--dim", "5", "--d-max", "1")
    assert [r["d"] for r in json.loads(out)["rows"]] == [1]


def test_classify_family(capsys):
    code, out = run(capsys, "classify", "--k", "2", "--family", "1", "--count", "5")
    rep = json.loads(out)
    assert code == 0 and rep["component_lower_bound"] == 5
    assert len({r["eta"] for r in rep["rows"]}) == 5


def test_classify_csv_columns(capsys):
    code, out = run(capsys, "classify", "--dim", "5", "--d-max", "3", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "d,n_or_k,eta_num,eta_den,diffeo_class,kervaire,components"
    assert lines[2].startswith("3,k=1,-3,4,")


def test_cheeger_hopf(capsys):
    code, out = run(capsys, "cheeger", "--chart", "hopf", "--t", "0,1,10")
    rep = json.loads(out)
    assert code == 0
    for row in rep["profile"]:
        assert row["fiber_length2"] == pytest.approx(row["berger_lambda2"])
        assert row["bound"] == pytest.approx(row["berger_lambda2"])


def test_cheeger_torus(capsys):
    code, out = run(capsys, "cheeger", "--chart", "torus", "--t-max", "100")
    rep = json.loads(out)
    assert rep["t0"]["t0"] is None and rep["t0"]["verdict"].startswith("none")


def test_cheeger_brieskorn(capsys):
    code, out = run(capsys, "cheeger", "--chart", "brieskorn", "--n", "3", "--d", "3", "--samples", "32",
                    "--t-max", "1000")
    rep = json.loads(out)
    assert code == 0
    assert rep["t0"]["verdict"].startswith("certified") or rep["t0"]["verdict"] == "not certified at t_max"


def test_cheeger_bad_chart_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"algebra": {"structure_constants": [[[0]]], "Q": [[-1]]}, "charts": []}))
    code, out = run(capsys, "cheeger", "--chart", str(path))
    assert code != 0 and "positive definite" in json.loads(out)["error"]["message"]


@pytest.mark.parametrize("argv", [
    ["eta", "--n", "3", "--d", "7"],
    ["fixedpoints", "--n", "5", "--d", "5", "--epsilon", "1/2"],
    ["classify", "--k", "1", "--family", "3", "--count", "4"],
    ["cheeger", "--chart", "brieskorn", "--samples", "8", "--t-max", "100", "--seed", "3"],
])
def test_json_round_trip_and_determinism(capsys, argv):
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second
    assert json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n" == first


def test_text_and_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out = run(capsys, "eta", "--n", "3", "--d", "3", "--format", "text", "--output", str(target))
    assert code == 0 and out == ""
    assert "-3/4" in target.read_text()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "brieskorn_eta", "eta", "--n", "3", "--d", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "-1/4"
    proc = subprocess.run([sys.executable, "-m", "brieskorn_eta", "nope"], capture_output=True, text=True)
    assert proc.returncode != 0 and "error" in json.loads(proc.stdout)
