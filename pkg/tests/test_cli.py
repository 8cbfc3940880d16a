import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "ptspec.cli"]


def run(*args, **kw):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, timeout=600, **kw
    )


def test_wedges_harmonic():
    r = run("wedges", "--eps", "0")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["degrees"]["opening"] == pytest.approx(90.0)


def test_wedges_at_minus_one():
    r = run("wedges", "--eps", "-1")
    assert r.returncode == 0
    assert json.loads(r.stdout)["degrees"]["opening"] == pytest.approx(120.0)


def test_wedges_domain_error_exit():
    r = run("wedges", "--eps", "-4")
    assert r.returncode == 1


def test_usage_error_exit():
    r = run("wedges")
    assert r.returncode == 1
    r = run("frobnicate")
    assert r.returncode == 1


def _solve_args(tmp_path, out_name):
    return (
        "--out",
        str(tmp_path / out_name),
        "solve",
        "--eps",
        "-2.6",
        "--n",
        "800",
        "--eta",
        "0.03",
        "--shifts",
        "3",
        "--rectangle",
        "-0.3",
        "0.6",
        "-0.6",
        "0.6",
    )


def test_solve_csv_schema_and_determinism(tmp_path):
    r1 = run(*_solve_args(tmp_path, "a.csv"))
    assert r1.returncode == 0, r1.stderr
    r2 = run(*_solve_args(tmp_path, "b.csv"))
    assert r2.returncode == 0
    a = (tmp_path / "a.csv").read_text()
    b = (tmp_path / "b.csv").read_text()
    assert a == b, "identical input and seed must give byte-identical output"
    lines = a.splitlines()
    assert lines[0] == "# ptspec-csv v1"
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == "re_E,im_E,residual,tag"
    assert len(lines) > 3


def test_solve_empty_region_numerical_exit(tmp_path):
    r = run(
        "solve", "--eps", "-2.6", "--n", "800", "--eta", "0.03",
        "--shifts", "2", "--rectangle", "abc", "50", "-1", "1",
    )
    assert r.returncode == 1  # malformed float -> usage error
    r = run(
        "solve", "--eps", "-2.6", "--n", "800", "--eta", "0.03",
        "--shifts", "2", "--rectangle", "40", "50", "-1", "1",
    )
    assert r.returncode == 2  # nothing converges out there


def test_shoot_count():
    r = run("shoot", "--eps", "0", "--count", "--emax", "6")
    assert r.returncode == 0
    assert json.loads(r.stdout)["count"] == 3


def test_shoot_eigenvalue():
    r = run("shoot", "--eps", "0", "--guess-re", "1.2")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["eigenvalue"]["re"] == pytest.approx(1.0, abs=1e-6)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "ptspec.cfg"
    cfg.write_text("steps=2000\n")
    # config value applies
    r = run("--config", str(cfg), "shoot", "--eps", "0", "--guess-re", "1.2")
    assert r.returncode == 0
    assert json.loads(r.stdout)["steps"] == 2000
    # flag beats config
    r = run("--config", str(cfg), "shoot", "--eps", "0", "--guess-re", "1.2", "--steps", "3000")
    assert r.returncode == 0
    assert json.loads(r.stdout)["steps"] == 3000
    # missing config file is an I/O error
    r = run("--config", str(tmp_path / "nope.cfg"), "wedges", "--eps", "0")
    assert r.returncode == 3


def test_asympt_near_minus_one(tmp_path):
    out = tmp_path / "asympt.csv"
    r = run("--out", str(out), "asympt", "--near", "-1", "--delta", "0.05", "--rows", "0")
    assert r.returncode == 0, r.stderr
    text = out.read_text().splitlines()
    assert text[0] == "# ptspec-csv v1"
    row = text[-1].split(",")
    assert float(row[5]) < 25.0  # leading-order estimate within 25 percent


def test_plot_roundtrip_and_determinism(tmp_path):
    csv = tmp_path / "data.csv"
    csv.write_text(
        "# ptspec-csv v1\nx,y\n0,0\n1,1\n2,4\n3,9\n"
    )
    out1 = tmp_path / "p1.svg"
    out2 = tmp_path / "p2.svg"
    assert run("--out", str(out1), "plot", str(csv), "--x", "x", "--y", "y").returncode == 0
    assert run("--out", str(out2), "plot", str(csv), "--x", "x", "--y", "y").returncode == 0
    assert out1.read_text() == out2.read_text()
    assert out1.read_text().startswith("<svg")


def test_plot_empty_csv_fails(tmp_path):
    csv = tmp_path / "empty.csv"
    csv.write_text("# ptspec-csv v1\n")
    r = run("--out", str(tmp_path / "x.svg"), "plot", str(csv), "--x", "x", "--y", "y")
    assert r.returncode != 0


def test_plot_requires_out(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("# ptspec-csv v1\nx,y\n0,0\n1,1\n")
    r = run("plot", str(csv), "--x", "x", "--y", "y")
    assert r.returncode == 1
