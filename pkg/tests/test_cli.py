from __future__ import annotations

import csv
import json
import math
import textwrap

import pytest

from zsaudit.cli import main
from zsaudit.config import build, validate


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return p


CONST = """
schema_version = 1
mode = "analyze-potential"
n_window = 3
[potential]
kind = "constant-offdiagonal"
a = 1.0
"""


def test_validate_examples():
    assert validate({"schema_version": 1, "mode": "audit", "potential": {"kind": "zero"}}) == []
    d = validate({"schema_version": 1, "mode": "audit", "potential": {"a": 1.0}})
    assert any(x.startswith("potential.kind:") for x in d)
    d = validate({"schema_version": 1, "mode": "audit", "n_window": 0, "potential": {"kind": "zero"}})
    assert d == ["n_window: must be >= 1"]


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"mode": "audit", "potential": {"kind": "zero"}}, "schema_version"),
        ({"schema_version": 2, "mode": "audit", "potential": {"kind": "zero"}}, "schema_version"),
        ({"schema_version": 1, "mode": "plot", "potential": {"kind": "zero"}}, "mode"),
        ({"schema_version": 1, "mode": "audit"}, "input"),
        ({"schema_version": 1, "mode": "audit", "potential": {"kind": "zero"}, "gaps": {"intervals": [[0, 1]]}}, "input"),
        ({"schema_version": 1, "mode": "audit", "tol": -1, "potential": {"kind": "zero"}}, "tol"),
        ({"schema_version": 1, "mode": "audit", "p_list": [0.5], "potential": {"kind": "zero"}}, "p_list[0]"),
        ({"schema_version": 1, "mode": "audit", "weights": ["cubic"], "potential": {"kind": "zero"}}, "weights"),
        ({"schema_version": 1, "mode": "audit", "potential": {"kind": "constant-offdiagonal"}}, "potential.a"),
        ({"schema_version": 1, "mode": "audit", "potential": {"kind": "zero", "a": 1}}, "potential.a"),
        ({"schema_version": 1, "mode": "audit", "gaps": {"intervals": [[0, 1], [0.5, 2]]}}, "gaps.intervals"),
        ({"schema_version": 1, "mode": "audit", "comb": {"g": [1.0], "h": [1.0, 2.0]}}, "comb.h"),
        ({"schema_version": 1, "mode": "sweep", "potential": {"kind": "zero"}}, "sweep"),
        ({"schema_version": 1, "mode": "sweep", "potential": {"kind": "constant-offdiagonal", "a": 1},
          "sweep": {"parameter": "b", "values": [1]}}, "sweep.parameter"),
        ({"schema_version": 1, "mode": "audit", "colour": 1, "potential": {"kind": "zero"}}, "colour"),
    ],
)
def test_diagnostics_name_the_key(raw, key):
    diags = validate(raw)
    assert diags and any(d.split(": ")[0] == key for d in diags), diags


def test_build_overrides_and_inf():
    cfg = build({"schema_version": 1, "mode": "audit", "p_list": [1, "inf"], "potential": {"kind": "zero"}},
                n_window=5)
    assert cfg.n_window == 5 and cfg.p_list == (1.0, math.inf)


def test_analyze_potential_summary(tmp_path):
    cfg = write(tmp_path, "c.toml", CONST)
    assert main(["--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "out" / "summary.csv")))
    assert list(rows[0]) == ["n", "z_minus", "z_plus", "z_crit", "h", "gap_length", "A", "J",
                             "mu_plus", "mu_minus", "e_charge", "d_moment"]
    r0 = [r for r in rows if r["n"] == "0"][0]
    assert float(r0["z_minus"]) == pytest.approx(-1, rel=1e-9)
    assert float(r0["z_plus"]) == pytest.approx(1, rel=1e-9)
    assert float(r0["h"]) == pytest.approx(1, rel=1e-9)
    assert float(r0["A"]) == pytest.approx(1, rel=1e-9)
    doc = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert doc["moments"]["id_convention"] == "B"


def test_audit_zero_exit_zero(tmp_path):
    cfg = write(tmp_path, "z.toml", 'schema_version = 1\nmode = "audit"\n[potential]\nkind = "zero"\n')
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    doc = json.loads((tmp_path / "o" / "audit.json").read_text())
    assert doc["counts"]["fail"] == 0


def test_sweep_table(tmp_path):
    cfg = write(tmp_path, "s.toml", CONST.replace("analyze-potential", "sweep")
                + '[sweep]\nparameter = "a"\nvalues = [0.1, 0.5, 1.0, 2.0]\n')
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "o" / "sweep.csv")))
    assert [r["value"] for r in rows] == ["0.1", "0.5", "1.0", "2.0"]
    assert all(r["status"] == "pass" for r in rows)
    for i in range(4):
        assert (tmp_path / "o" / f"sweep_{i:03d}" / "audit.json").exists()


def test_gaps_with_profiles(tmp_path):
    cfg = write(tmp_path, "g.toml", """
        schema_version = 1
        mode = "analyze-comb"
        profiles = true
        [gaps]
        intervals = [[-2.0, -1.0], [1.0, 2.0]]
        """)
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "comb_summary.csv").exists()
    assert (tmp_path / "o" / "profiles" / "profile_1.csv").exists()


def test_failing_comb_exit_two(tmp_path, capsys):
    cfg = write(tmp_path, "f.toml", """
        schema_version = 1
        mode = "audit"
        [comb]
        g = [2.0]
        h = [5.0]
        A = [1.0]
        """)
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "audit failure" in capsys.readouterr().err


def test_errors_exit_one(tmp_path, capsys):
    bad = write(tmp_path, "b.toml", 'schema_version = 1\nmode = "audit"\nn_window = 0\n[potential]\nkind = "zero"\n')
    assert main(["--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "n_window" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "missing.toml")]) == 1
    broken = write(tmp_path, "x.toml", "schema_version = = 1")
    assert main(["--config", str(broken)]) == 1
    assert main(["--config", str(bad), "--validate-only"]) == 1
    good = write(tmp_path, "g.toml", CONST)
    assert main(["--config", str(good), "--validate-only"]) == 0
    assert main(["--config", str(good), "--p-list", "1,x"]) == 1


def test_numerical_failure_exit_one(tmp_path, capsys):
    cfg = write(tmp_path, "g.toml", """
        schema_version = 1
        mode = "audit"
        [gaps]
        intervals = [[-10.0, -0.01], [0.01, 10.0]]
        max_iter = 2
        """)
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert "ConvergenceError" in capsys.readouterr().err


def test_env_output_dir(tmp_path, monkeypatch):
    cfg = write(tmp_path, "c.toml", CONST)
    monkeypatch.setenv("ZSAUDIT_OUT", str(tmp_path / "envout"))
    assert main(["--config", str(cfg), "--n-window", "2"]) == 0
    assert (tmp_path / "envout" / "summary.csv").exists()


def test_cli_overrides(tmp_path):
    cfg = write(tmp_path, "z.toml", 'schema_version = 1\nmode = "analyze-potential"\n[potential]\nkind = "zero"\n')
    out = tmp_path / "o"
    assert main(["--config", str(cfg), "--out", str(out), "--mode", "audit", "--p-list", "2,inf",
                 "--weights", "unit", "--tol", "1e-9"]) == 0
    rows = list(csv.DictReader(open(out / "audit.csv")))
    assert {r["omega"] for r in rows} == {"unit"}
    assert {r["p"] for r in rows} <= {"2.0", "inf", ""}
