import json

import pytest

from fuzzyfix.cli import main, read_points


@pytest.fixture
def points(tmp_path):
    p = tmp_path / "pts.txt"
    p.write_text("# odd numbers\n1\n3\n\n5  # middle\n7\n9\n")
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_read_points(points, tmp_path):
    assert read_points(str(points)) == [1.0, 3.0, 5.0, 7.0, 9.0]
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nx\n")
    assert main(["net", "--points", str(bad), "--epsilon", "1", "--r", "0.5"]) == 2


def test_axioms(capsys):
    code, out = run(["axioms", "--samples", "500"], capsys)
    assert code == 0 and json.loads(out.out)["passed"]


def test_axioms_detects_domain_defect(capsys):
    code, out = run(["axioms", "--samples", "3000", "--lo", "0", "--hi", "1", "--t-max", "0.5"], capsys)
    assert code == 1
    assert json.loads(out.out)["fmetric"]["checks"][3]["status"] == "fail"


def test_net(points, capsys, tmp_path):
    out_file = tmp_path / "net.json"
    code, out = run(["net", "--points", points, "--epsilon", 0.4714045207910317,
                     "--r", 0.2928932188134524, "--out", out_file], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["min_net"]["size"] == 5 and rep["obstruction"]["all_blocked"]
    assert json.loads(out_file.read_text()) == rep


def test_fixpoint(capsys, tmp_path):
    csv = tmp_path / "trace.csv"
    code, out = run(["fixpoint", "--out", csv, "--samples", "1000"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["converged"] and abs(rep["fixed_point"]) < 1e-8
    assert csv.read_text().startswith("iter,point,step")


def test_fixpoint_tenfold_fails(capsys):
    code, out = run(["fixpoint", "--example", "tenfold", "--max-iter", "30", "--samples", "200"], capsys)
    rep = json.loads(out.out)
    assert code == 1 and not rep["contraction"]["holds"] and not rep["converged"]


def test_satellite(capsys, tmp_path):
    csv, rep_file = tmp_path / "sol.csv", tmp_path / "rep.json"
    code, out = run(["satellite", "--grid", 51, "--out", csv, "--report", rep_file], capsys)
    assert code == 0
    assert json.loads(rep_file.read_text())["converged"]
    assert len(csv.read_text().splitlines()) == 52


def test_satellite_nonconvergence_exit(capsys):
    code, _ = run(["satellite", "--grid", 21, "--max-iter", 2], capsys)
    assert code == 1


def test_figure1_stdout(capsys):
    code, out = run(["figure1", "--grid", 3], capsys)
    lines = out.out.splitlines()
    assert code == 0 and lines[0] == "panel,x,y,t,M_Tx_Ty,psi_M_x_y,margin"
    assert len(lines) == 1 + 9 + 50


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["net", "--epsilon", "1", "--r", "0.5"],
    ["net", "--points", "/nonexistent/p.txt", "--epsilon", "1", "--r", "0.5"],
    ["satellite", "--grid", "2"], ["satellite", "--tol", "0"], ["figure1", "--t", "-1"],
    ["figure1", "--out", "/nonexistent/dir/f.csv"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
