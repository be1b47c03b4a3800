import json
import subprocess
import sys

import numpy as np
import pytest

from contextsim.cli import main
from contextsim.inequalities import eval_pm, eval_transformed_bell
from contextsim.report import (
    emit_csv,
    emit_json,
    emit_report,
    parse_report_json,
    with_noise,
)
from contextsim.noise import NoiseModel, depolarize
from contextsim.states import basis_state, bell_phi_plus


class TestCsvContract:
    def test_pm_row_census(self, capsys):
        assert main(["pm", "--state", "00", "--method", "direct", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "inequality,term,theory,value,method"
        assert len(lines) == 8  # header + 6 terms + SUM
        assert lines[1] == "pm,A.B.C,1.000000,1.000000,direct"
        assert lines[-1] == "pm,SUM,4.000000,6.000000,direct"

    def test_bell_sum_row(self, capsys):
        assert main(["bell", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-1] == "bell,SUM,-3.000000,-4.045085,direct"
        assert len(lines) == 7

    def test_empty_report_refused(self):
        rep = eval_pm(basis_state(2, "00"), "direct")
        import dataclasses

        hollow = dataclasses.replace(rep, terms=(), term_predictions=(), term_signs=())
        with pytest.raises(ValueError):
            emit_csv(hollow)


class TestJsonRoundTrip:
    def test_field_for_field(self):
        for rep in (
            eval_pm(basis_state(2, "00"), "scattering"),
            eval_transformed_bell(bell_phi_plus(), "direct"),
        ):
            assert parse_report_json(emit_json(rep)) == rep

    def test_noise_degraded_round_trip(self):
        model = NoiseModel(state_depolarizing_p=0.1, block_visibility_v=0.92)
        ideal = eval_pm(basis_state(2, "00"), "direct")
        noisy = eval_pm(depolarize(basis_state(2, "00"), 0.1), "direct")
        degraded = with_noise(ideal, noisy, model)
        assert parse_report_json(emit_json(degraded)) == degraded
        assert degraded.sum == pytest.approx(6 * 0.92 ** 3, abs=1e-9)
        assert degraded.term_predictions == tuple(v for _, v in ideal.terms)


class TestCommands:
    def test_bad_state_literal(self, capsys):
        assert main(["pm", "--state", "bogus"]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_wrong_register_size(self, capsys):
        assert main(["pm", "--state", "0"]) == 2

    def test_kcbs_with_acos_token(self, capsys):
        assert main(
            ["kcbs", "--state", "0", "--theta", "acos(-0.75)", "--method", "sequential",
             "--format", "csv"]
        ) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-1] == "kcbs,SUM,-3.000000,-2.000000,sequential"

    def test_pentagon_theta_pi(self, capsys):
        assert main(["pentagon", "--theta", "pi", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-1] == "pentagon,SUM,-2.000000,-2.000000,direct"
        assert len(lines) == 12  # header + 10 pairs + SUM

    def test_bell_table_shows_verdict(self, capsys):
        assert main(["bell"]) == 0
        out = capsys.readouterr().out
        assert "VIOLATED" in out and "side conditions satisfied: True" in out

    def test_noise_flags(self, capsys):
        assert main(["pm", "--noise-p", "0.2", "--visibility", "0.92", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sum"] == pytest.approx(6 * 0.92 ** 3, abs=1e-9)
        assert payload["term_predictions"][0] == pytest.approx(1.0, abs=1e-12)

    def test_bounds_single_target_csv(self, capsys):
        assert main(["bounds", "--target", "temporal-kcbs", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "target,optimum,converged,iterations,tolerance"
        assert lines[1].startswith("temporal-kcbs,-4.045085,True")

    def test_output_file_and_determinism(self, tmp_path, capsys):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        assert main(["bell", "--format", "json", "--output", str(first)]) == 0
        assert main(["bell", "--format", "json", "--output", str(second)]) == 0
        capsys.readouterr()
        assert first.read_bytes() == second.read_bytes()

    def test_output_dir_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("CONTEXTSIM_OUTPUT_DIR", str(tmp_path))
        assert main(["pm", "--format", "csv", "--output", "report.csv"]) == 0
        capsys.readouterr()
        assert (tmp_path / "report.csv").exists()

    def test_unwritable_output(self, tmp_path, capsys):
        missing = tmp_path / "no" / "such" / "dir" / "out.csv"
        assert main(["pm", "--format", "csv", "--output", str(missing)]) == 4

    def test_config_file_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"method": "sequential", "format": "csv"}))
        assert main(["--config", str(cfg), "pm"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-1].endswith(",sequential")

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"method": "sequential"}))
        assert main(["--config", str(cfg), "pm", "--method", "direct", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-1].endswith(",direct")

    def test_bad_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["--config", str(cfg), "pm"]) == 2


class TestConsoleScript:
    def test_pm_via_interpreter(self):
        proc = subprocess.run(
            [sys.executable, "-m", "contextsim.cli", "pm", "--format", "csv"],
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip().split("\n")[-1] == "pm,SUM,4.000000,6.000000,direct"


class TestTableFormat:
    def test_table_contains_bound_and_prediction(self):
        text = emit_report(eval_pm(basis_state(2, "00"), "direct"), "table")
        assert "classical bound: <= 4.000000" in text
        assert "quantum prediction: 6.000000" in text
        assert "VIOLATED" in text
