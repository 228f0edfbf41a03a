"""Config parsing, subcommands, CSV formats and exit codes."""

from pathlib import Path

import numpy as np
import pytest

from degenpde.cli import (cmd_analyze, cmd_profile, cmd_solve, cmd_verify,
                          load_config, main, parse_config, RunConfig)
from degenpde.errors import ConfigError

DEMOS = Path(__file__).resolve().parent.parent / "demos"

MINIMAL = """
k = 1
m = 2
p = 2
q = 0
beta = 5
N = 1
a = 0.5
t_end = 2
"""


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.problem.t0 == 1.0
        assert cfg.problem.a == 0.5
        assert cfg.problem.epsilon == 1
        assert cfg.solver.M == 400
        assert cfg.solver.dt == 1e-3

    def test_shipped_fig2a(self):
        cfg = load_config(DEMOS / "fig2a.cfg")
        pp = cfg.problem
        assert (pp.q, pp.m, pp.k, pp.p) == (0.0, 3.0, 3.2, 4.0)
        assert (pp.n, pp.n1, pp.l, pp.beta, pp.N) == (0.2, 1.0, 0.0, 1.3, 2)

    def test_bad_value_reports_line(self):
        with pytest.raises(ConfigError) as err:
            parse_config("k = 1\nm = 1\np = banana\nq = 0\nN = 1\n")
        assert "line 3" in str(err.value)

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as err:
            parse_config(MINIMAL + "\nwibble = 3\n")
        assert "unknown key" in str(err.value)

    def test_missing_required(self):
        with pytest.raises(ConfigError) as err:
            parse_config("k = 1\nm = 1\n")
        assert "missing required" in str(err.value)


def _config(text, out):
    cfg = parse_config(text)
    cfg.output_dir = str(out)
    return cfg


class TestAnalyze:
    def test_e1_constants_and_verdict(self, tmp_path, capsys):
        text = MINIMAL.replace("beta = 5", "beta = 3").replace("a = 0.5", "a = 1")
        assert cmd_analyze(_config(text, tmp_path)) == 0
        out = capsys.readouterr().out
        assert "subcritical" in out
        lines = (tmp_path / "constants.csv").read_text().splitlines()
        row = next(l for l in lines if l.startswith("beta2_crit"))
        assert row == "beta2_crit,4,-"

    def test_e2_solvability_threshold(self, tmp_path, capsys):
        assert cmd_analyze(_config(MINIMAL, tmp_path)) == 0
        out = capsys.readouterr().out
        assert "supercritical; globally solvable for a <= 0.84090" in out

    def test_critical_branch_flag(self, tmp_path, capsys):
        text = MINIMAL.replace("m = 2", "m = 1")
        cmd_analyze(_config(text, tmp_path))
        assert "exponential profile branch" in capsys.readouterr().out


class TestProfile:
    def test_e2_samples(self, tmp_path):
        assert cmd_profile(_config(MINIMAL, tmp_path)) == 0
        lines = (tmp_path / "profile.csv").read_text().splitlines()
        assert lines[0] == "xi,f"
        assert len(lines) == 1002   # header + 1001 sample rows
        first = lines[1].split(",")
        assert float(first[1]) == 0.5
        # past the front the profile vanishes
        beyond = [l for l in lines[1:] if float(l.split(",")[0]) > 1.4143]
        assert all(float(l.split(",")[1]) == 0.0 for l in beyond)

    def test_fast_tail_positive(self, tmp_path):
        text = MINIMAL.replace("m = 2", "m = 0.5").replace("N = 1", "N = 3") \
                      .replace("beta = 5", "beta = 2").replace("a = 0.5", "a = 1")
        assert cmd_profile(_config(text, tmp_path)) == 0
        lines = (tmp_path / "profile.csv").read_text().splitlines()[1:]
        assert all(float(l.split(",")[1]) > 0.0 for l in lines)


class TestSolve:
    def test_e2_run_files(self, tmp_path):
        assert cmd_solve(_config(MINIMAL, tmp_path)) == 0
        meta = (tmp_path / "meta.csv").read_text().splitlines()
        iters = [int(l.split(",")[2]) for l in meta[1:]]
        assert max(iters) <= 5
        summary = (tmp_path / "run_summary.txt").read_text()
        assert "termination: completed" in summary
        front = (tmp_path / "front.csv").read_text().splitlines()
        assert front[0] == "t,tau,r_front"
        assert len(front) == len(meta) + 1   # one per accepted step plus t0

    def test_single_level_when_t_end_is_t0(self, tmp_path):
        text = MINIMAL.replace("t_end = 2", "t_end = 1")
        assert cmd_solve(_config(text, tmp_path)) == 0
        snaps = (tmp_path / "snapshots.csv").read_text().splitlines()
        times = {l.split(",")[0] for l in snaps[1:]}
        assert len(times) == 1

    def test_e1_blowup_termination(self, tmp_path):
        text = """
k = 1
m = 2
p = 2
q = 0
beta = 3
N = 1
M = 100
R = 8
dt = 2e-3
t_end = 20
"""
        assert cmd_solve(_config(text, tmp_path)) == 0
        summary = (tmp_path / "run_summary.txt").read_text()
        assert "termination: blowup" in summary

    def test_byte_stable_outputs(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        text = MINIMAL.replace("M = 400", "M = 100") + "\nM = 100\n"
        cmd_solve(_config(text, a))
        cmd_solve(_config(text, b))
        for fname in ("snapshots.csv", "front.csv", "meta.csv"):
            assert (a / fname).read_bytes() == (b / fname).read_bytes()


class TestVerify:
    def test_e2_all_applicable_pass(self, tmp_path, capsys):
        code = cmd_verify(_config(MINIMAL, tmp_path))
        out = capsys.readouterr().out
        assert code == 0, out
        rows = (tmp_path / "verify.csv").read_text().splitlines()[1:]
        statuses = {r.split(",")[0]: r.split(",")[1] for r in rows}
        assert statuses["supersolution_sign"] == "pass"
        assert statuses["comparison_with_supersolution"] == "pass"
        assert statuses["front_law"] == "pass"
        assert statuses["lemma_ordering"] == "pass"
        assert statuses["asymptotic_ratio"] == "pass"

    def test_e1_checks_skipped(self, tmp_path):
        text = MINIMAL.replace("beta = 5", "beta = 3").replace("a = 0.5", "a = 1") \
            + "\nM = 100\nR = 6\ndt = 2e-3\n"
        code = cmd_verify(_config(text, tmp_path))
        rows = (tmp_path / "verify.csv").read_text().splitlines()[1:]
        statuses = {r.split(",")[0]: r.split(",")[1] for r in rows}
        assert statuses["supersolution_sign"] == "skip"
        assert statuses["comparison_with_supersolution"] == "skip"


class TestMain:
    def test_missing_config_is_config_error(self, tmp_path):
        assert main(["analyze", "--config", str(tmp_path / "nope.cfg")]) == 1

    def test_invalid_value_is_config_error(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("k = 1\nm = 1\np = banana\nq = 0\nN = 1\n")
        assert main(["analyze", "--config", str(cfg)]) == 1

    def test_analyze_roundtrip(self, tmp_path):
        cfg = tmp_path / "ok.cfg"
        cfg.write_text(MINIMAL)
        out = tmp_path / "created" / "nested"
        assert main(["analyze", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "constants.csv").exists()

    def test_solver_level_error_exits_2(self, tmp_path):
        # absorption with a superlinear source exponent leaves the power-law
        # amplitude constant undefined; the failure surfaces as exit code 2
        cfg = tmp_path / "absorb.cfg"
        cfg.write_text(MINIMAL.replace("q = 0", "q = 0\nepsilon = -1"))
        out = tmp_path / "out"
        assert main(["analyze", "--config", str(cfg), "--out", str(out)]) == 2
