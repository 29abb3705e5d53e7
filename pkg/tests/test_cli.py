import json
import subprocess
import sys

import pytest

from fracorlicz import cli

CFG = {"young": {"kind": "p_q", "p": 2, "q": 3},
       "domain": {"type": "interval", "a": 0, "b": 1, "h": 0.0625},
       "s": 0.5, "alpha": [0.5, 1.0]}


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps(CFG))
    return p


def _run(*args):
    return cli.main([str(a) for a in args])


def test_analyze(cfg_path, tmp_path):
    out = tmp_path / "out"
    assert _run("analyze", "--config", cfg_path, "--out", out, "--no-timestamp") == 0
    doc = json.loads((out / "analyze.json").read_text())
    assert doc["schema_version"] == 1 and doc["command"] == "analyze"
    assert "generated_at" not in doc
    assert doc["matuszewska"]["i"] == 3.0 and doc["conditions"]["cond1"] in ("holds", "fails", "inconclusive")
    assert (out / "matuszewska.csv").read_text().startswith("t,M,M0,Minf")


def test_infinite_values_are_strings(tmp_path):
    p = tmp_path / "e.json"
    p.write_text(json.dumps({**CFG, "young": {"kind": "exp_taylor", "k": 2}}))
    assert _run("analyze", "--config", p, "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "analyze.json").read_text())
    assert doc["matuszewska"]["i"] == "inf"
    assert "generated_at" in doc


def test_bound(cfg_path, tmp_path):
    assert _run("bound", "--config", cfg_path, "--out", tmp_path, "--no-timestamp") == 0
    doc = json.loads((tmp_path / "bound.json").read_text())
    assert [r["theorem"] for r in doc["reports"]] == ["thm1", "thm2_inverse", "thm2_diameter", "thm4_inradius"]
    assert len(doc["eigenvalue_reports"]) == 4
    rows = (tmp_path / "bound_sweep.csv").read_text().splitlines()
    assert rows[0].startswith("r,thm1") and len(rows) == 10


def test_solve(cfg_path, tmp_path):
    assert _run("solve", "--config", cfg_path, "--out", tmp_path, "--no-timestamp", "--seed", "3") == 0
    doc = json.loads((tmp_path / "solve.json").read_text())
    assert doc["config"]["seed"] == 3
    lam = [r["lambda"] for r in doc["results"]]
    E = [r["alpha"] * r["lambda"] for r in doc["results"]]
    assert E[0] < E[1] and all(v > 0 for v in lam)
    assert (tmp_path / "energy.csv").exists() and (tmp_path / "minimizer_alpha_0.5.csv").exists()


def test_config_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({**CFG, "s": 2}))
    assert _run("solve", "--config", p, "--out", tmp_path) == cli.EXIT_CONFIG
    assert "s:" in capsys.readouterr().err
    assert not (tmp_path / "solve.json").exists()


def test_nonconvergence_exit_code(cfg_path, tmp_path, monkeypatch):
    real = cli.sp.SolverOptions

    def starved(**kw):
        return real(**{**kw, "max_iter": 1, "rtol": 0.0, "starts": ("random",)})

    monkeypatch.setattr(cli.sp, "SolverOptions", starved)
    assert _run("solve", "--config", cfg_path, "--out", tmp_path) == cli.EXIT_NONCONVERGENT
    doc = json.loads((tmp_path / "solve.json").read_text())
    assert doc["results"][0]["converged"] is False


def test_missing_config_flag():
    with pytest.raises(SystemExit):
        _run("solve")


def test_module_entry_point_verify(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fracorlicz", "verify", "--out", str(tmp_path),
                           "--no-timestamp"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["passed"] is True and set(doc["suites"]) == {"young", "matuszewska", "bounds",
                                                              "domain", "spectral"}
