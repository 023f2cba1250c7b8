import json
import subprocess
import sys

import pytest

from urlab.cli import main, parse_state_spec


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_group_passes(capsys):
    code, out, _ = run(["verify", "--only", "rank-two"], capsys)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["conventions"]["hbar"] == 1.0
    assert {c["group"] for c in report["checks"]} == {"rank-two"}
    assert {"lhs", "rhs", "gap", "tolerance", "passed"} <= set(report["checks"][0])


def test_verify_impossible_tolerance_fails(capsys):
    code, out, _ = run(["verify", "--only", "gaussian", "--tol", "1e-15"], capsys)
    assert code == 1
    assert not json.loads(out)["passed"]


def test_verify_writes_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, _, _ = run(["verify", "--only", "dephased", "--report", str(path)], capsys)
    assert code == 0
    assert json.loads(path.read_text())["groups"] == ["dephased"]


def test_verify_unknown_group_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--only", "nonsense"])
    assert info.value.code == 2


def test_fig1_csv_is_byte_identical_across_runs(tmp_path, capsys):
    args = ["fig1", "--n", "16", "--orders", "1,2", "--points", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a), "--workers", "1"]) == 0
    assert main(args + ["--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "mu,nu,qfi_over_n,order,bound_over_n"
    assert len(lines) == 1 + 5 * 2


def test_fig1_bad_grid_is_usage_error(capsys):
    code, _, err = run(["fig1", "--mu-min", "1", "--mu-max", "0.1", "--out", "-"], capsys)
    assert code == 2 and "mu-min" in err


def test_negativity_csv(capsys):
    code, out, _ = run(["negativity", "--n", "3", "--mu", "0.5", "--out", "-"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "n,k,N_exact,N_eq29,family"
    n, k, exact, approx, family = rows[1].split(",")
    assert (n, k, family) == ("3", "1", "dicke")
    assert float(exact) == pytest.approx((5**0.5 - 1) / 6, abs=1e-12)
    assert rows[-1].endswith("squeezed(mu=0.5)")


def test_unwritable_path_is_io_error(capsys):
    code, _, err = run(["negativity", "--n", "4", "--out", "/nonexistent-dir/x.csv"], capsys)
    assert code == 3 and "I/O" in err


@pytest.mark.parametrize("spec", ["thermal-jz:n=4,beta=1", "rank-two:g=0.75", "dicke:n=6,k=2",
                                  "squeezed:n=20,mu=0.05", "gaussian:beta=1,r=0.2,theta=1,alpha=0.5+0.5i"])
def test_bound_families(spec, capsys):
    code, out, err = run(["bound", spec], capsys)
    assert code == 0 and "hbar = 1" in err
    report = json.loads(out)
    for key in ("robertson", "schroedinger", "qfi_bound"):
        assert report[key]["gap"] >= -1e-8
    if not spec.startswith("squeezed"):
        assert report["qfi_bound"]["tight"]


@pytest.mark.parametrize("spec", ["nosuch:n=1", "dicke:n=4", "dicke:n=four,k=1", "thermal-jz:n"])
def test_bound_usage_errors(spec, capsys):
    code, _, err = run(["bound", spec], capsys)
    assert code == 2 and err.startswith("urlab: error")


def test_parse_state_spec():
    assert parse_state_spec("dicke: n=4, k=2") == ("dicke", {"n": "4", "k": "2"})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "urlab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("urlab ")
