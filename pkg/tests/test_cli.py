# -*- coding: utf-8 -*-
"""
Tests for the command-line interface.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def write_yaml(path: Path, payload: dict) -> str:
    path.write_text(yaml.safe_dump(payload))
    return str(path)


SMALL_CRT = {"k": 0, "p": 4, "m": 20.0, "r": 1, "e_min": 0.05, "e_max": 0.6, "points": 3, "trials": 20, "seed": 3}

SMOKE_EXPERIMENT = {
    "hamiltonian": {"n": 4, "seed": 0},
    "family": "random",
    "p": 4,
    "instances": 2,
    "master_seed": 0,
    "training": {"max_iters": 100},
}


class TestPredict:
    """Tests for the predict command."""

    def test_overparameterized(self, tmp_path, capsys):
        """Test that gamma >= 1 prints the message, exits 0 and writes nothing."""
        from src.cli.app import EXIT_OK, run
        from src.cli.commands import OVERPARAMETERIZED_MESSAGE

        out = tmp_path / "predict"
        code = run(["predict", "--gamma", "1.5", "--q", "20", "--output-dir", str(out)])
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert stdout.splitlines()[0] == OVERPARAMETERIZED_MESSAGE
        assert not out.exists()

    def test_missing_q(self, tmp_path):
        """Test that gamma without q is a user error."""
        from src.cli.app import EXIT_USER_ERROR, run

        assert run(["predict", "--gamma", "0.1", "--output-dir", str(tmp_path / "x")]) == EXIT_USER_ERROR


class TestErrors:
    """Tests for exit codes on bad input."""

    def test_malformed_config_writes_nothing(self, tmp_path):
        """Test exit 1 and no output directory for unreadable YAML."""
        from src.cli.app import EXIT_USER_ERROR, run

        bad = tmp_path / "bad.yaml"
        bad.write_text("p: [1, 2\n")
        out = tmp_path / "out"
        assert run(["crt", "--config", str(bad), "--output-dir", str(out)]) == EXIT_USER_ERROR
        assert not out.exists()

    def test_invalid_value_writes_nothing(self, tmp_path):
        """Test exit 1 for a config that parses but fails validation."""
        from src.cli.app import EXIT_USER_ERROR, run

        config = write_yaml(tmp_path / "crt.yaml", dict(SMALL_CRT, k=9))
        out = tmp_path / "out"
        assert run(["crt", "--config", config, "--output-dir", str(out)]) == EXIT_USER_ERROR
        assert not out.exists()

    def test_missing_config(self, tmp_path):
        """Test exit 1 when the config file does not exist."""
        from src.cli.app import EXIT_USER_ERROR, run

        assert run(["spectrum", "--config", str(tmp_path / "nope.yaml")]) == EXIT_USER_ERROR

    def test_numerical_failure_exit_code(self, tmp_path):
        """Test that a numerical failure maps to exit 2."""
        from unittest.mock import patch

        from src.cli.app import EXIT_NUMERICAL_ERROR, run
        from src.core.exceptions import NormalizationError

        config = write_yaml(tmp_path / "spectrum.yaml", {"ensemble": "goe", "p": 8, "draws": 1})
        with patch("src.cli.app.cmd_spectrum", side_effect=NormalizationError("freeprob", "mass drift")):
            code = run(["spectrum", "--config", config, "--output-dir", str(tmp_path / "out")])
        assert code == EXIT_NUMERICAL_ERROR

    def test_numerical_failure_writes_nothing(self, tmp_path):
        """Test that an experiment failing mid-run exits 2 without creating its output directory."""
        from unittest.mock import patch

        from src.cli.app import EXIT_NUMERICAL_ERROR, run
        from src.core.exceptions import NormalizationError

        config = write_yaml(tmp_path / "smoke.yaml", SMOKE_EXPERIMENT)
        out = tmp_path / "out"
        with patch("src.cli.commands.ExperimentRunner.run", side_effect=NormalizationError("hamiltonian", "zero spread")):
            code = run(["experiment", "--config", config, "--output-dir", str(out)])
        assert code == EXIT_NUMERICAL_ERROR
        assert not out.exists()

    def test_no_command(self):
        """Test that running without a command is a user error."""
        from src.cli.app import EXIT_USER_ERROR, run

        assert run([]) == EXIT_USER_ERROR


class TestHamiltonian:
    """Tests for the hamiltonian command."""

    def test_report(self, capsys):
        """Test the printed statistics and gamma."""
        from src.cli.app import EXIT_OK, run

        assert run(["hamiltonian", "--n", "4", "--p", "6"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["n"] == 4
        assert report["diagnostics"]["A"] == 13
        assert report["gamma"] == pytest.approx(6 / (2 * report["stats"]["m"]))

    def test_sector(self, capsys):
        """Test that a sector changes the statistics' dimension."""
        from src.cli.app import EXIT_OK, run

        assert run(["hamiltonian", "--n", "4", "--sector", "2"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["sector"] == 2
        assert report["stats"]["dim"] == 6


class TestArtifacts:
    """Tests for commands that write run directories."""

    def test_crt_outputs_and_rerun(self, tmp_path):
        """Test the CRT header, the manifest and a byte-identical rerun."""
        from src.cli.app import EXIT_OK, run
        from src.cli.commands import CRT_COLUMNS

        config = write_yaml(tmp_path / "crt.yaml", SMALL_CRT)
        first = tmp_path / "first"
        assert run(["crt", "--config", config, "--output-dir", str(first)]) == EXIT_OK

        profile = (first / "crt_profile.csv").read_text()
        assert profile.splitlines()[0] == ",".join(CRT_COLUMNS)
        assert len(profile.splitlines()) == 4
        assert profile.splitlines()[1].split(",")[-1] not in ("", "-inf")
        manifest = yaml.safe_load((first / "manifest.yaml").read_text())
        assert manifest["command"] == "crt"
        assert manifest["config"]["trials"] == 20

        second = tmp_path / "second"
        assert run(["--from-manifest", str(first / "manifest.yaml"), "--output-dir", str(second)]) == EXIT_OK
        assert (second / "crt_profile.csv").read_text() == profile
        assert (second / "crt_cumulative.csv").read_text() == (first / "crt_cumulative.csv").read_text()

    def test_seed_flag_overrides_config(self, tmp_path):
        """Test that --seed lands in the manifest."""
        from src.cli.app import EXIT_OK, run

        config = write_yaml(tmp_path / "crt.yaml", SMALL_CRT)
        out = tmp_path / "out"
        assert run(["crt", "--config", config, "--seed", "11", "--output-dir", str(out)]) == EXIT_OK
        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert manifest["config"]["seed"] == 11
        assert manifest["master_seed"] == 11

    def test_experiment(self, tmp_path):
        """Test results.csv, summary.json and the plotting script of a smoke run."""
        from src.cli.app import EXIT_OK, run
        from src.services.experiment import CSV_COLUMNS

        config = write_yaml(tmp_path / "smoke.yaml", SMOKE_EXPERIMENT)
        out = tmp_path / "smoke"
        assert run(["experiment", "--config", config, "--output-dir", str(out), "--threads", "2"]) == EXIT_OK
        rows = (out / "results.csv").read_text().splitlines()
        assert rows[0] == ",".join(CSV_COLUMNS)
        assert len(rows) == 3
        summary = json.loads((out / "summary.json").read_text())
        assert summary["failed_instances"] == 0
        assert "results.csv" in (out / "plot_histogram.py").read_text()

    def test_crt_draws_from_trials_stream(self, tmp_path):
        """Test that the profile equals a direct run on the seed's trials stream."""
        from src.cli.app import EXIT_OK, run
        from src.theory.kacrice import crt_band_profile
        from src.utils.io import read_csv
        from src.utils.seeding import Stream, derive_generator

        config = write_yaml(tmp_path / "crt.yaml", SMALL_CRT)
        out = tmp_path / "crt"
        assert run(["crt", "--config", config, "--output-dir", str(out)]) == EXIT_OK
        grid = np.linspace(SMALL_CRT["e_min"], SMALL_CRT["e_max"], SMALL_CRT["points"])
        direct = crt_band_profile(0, 4, 20.0, 1, grid, 20, derive_generator(3, 0, Stream.TRIALS))
        written = [float(row["log_value"]) for row in read_csv(out / "crt_profile.csv")]
        assert written == pytest.approx(direct.log_values.tolist())

    def test_hva_paired_control(self, tmp_path):
        """Test the control results and the gamma-matched control summary of an HVA run."""
        from src.cli.app import EXIT_OK, run
        from src.core.config import FermiHubbardSpec
        from src.quantum.hamiltonian import build_fermi_hubbard, diagonalize, spectral_stats
        from src.services.experiment import CSV_COLUMNS, matched_random_p

        raw = dict(SMOKE_EXPERIMENT, family="hva", layers=1, paired_control=True)
        del raw["p"]
        config = write_yaml(tmp_path / "hva.yaml", raw)
        out = tmp_path / "hva"
        assert run(["experiment", "--config", config, "--output-dir", str(out)]) == EXIT_OK

        summary = json.loads((out / "summary.json").read_text())
        full_m = spectral_stats(diagonalize(build_fermi_hubbard(FermiHubbardSpec(n=4, seed=0)))).m
        control = summary["control"]
        assert summary["p"] == 3
        assert control["p"] == matched_random_p(summary["prediction"]["gamma"], full_m)
        assert "fraction_below_band_center" in summary and "fraction_below_band_center" in control
        rows = (out / "control_results.csv").read_text().splitlines()
        assert rows[0] == ",".join(CSV_COLUMNS)
        assert len(rows) == 3
        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert any(path.endswith("control_results.csv") for path in manifest["artifacts"])

    def test_p_flag(self, tmp_path):
        """Test that --p overrides the config's parameter count."""
        from src.cli.app import EXIT_OK, run
        from src.utils.io import read_csv

        config = write_yaml(tmp_path / "smoke.yaml", SMOKE_EXPERIMENT)
        out = tmp_path / "p6"
        assert run(["experiment", "--config", config, "--p", "6", "--output-dir", str(out)]) == EXIT_OK
        assert {row["p"] for row in read_csv(out / "results.csv")} == {"6"}

    def test_train_trajectory(self, tmp_path):
        """Test trajectory.csv and the recorded instance option."""
        from src.cli.app import EXIT_OK, run

        config = write_yaml(tmp_path / "smoke.yaml", SMOKE_EXPERIMENT)
        out = tmp_path / "train"
        assert run(["train", "--config", config, "--instance", "1", "--output-dir", str(out)]) == EXIT_OK
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == "iteration,normalized_energy"
        assert lines[1].startswith("0,")
        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert manifest["options"] == {"instance": 1}

    def test_spectrum(self, tmp_path):
        """Test the spectrum outputs for the GOE."""
        from src.cli.app import EXIT_OK, run

        config = write_yaml(tmp_path / "spectrum.yaml", {"ensemble": "goe", "p": 50, "draws": 4, "seed": 1})
        out = tmp_path / "spectrum"
        assert run(["spectrum", "--config", config, "--output-dir", str(out)]) == EXIT_OK
        assert len((out / "eigenvalues.csv").read_text().splitlines()) == 201
        report = json.loads((out / "spectrum.json").read_text())
        assert 0.0 <= report["ks_distance"] < 0.2
        assert report["atoms"] == []

    def test_predict_curve(self, tmp_path, capsys):
        """Test the asymptotic curve for an underparameterized gamma."""
        from src.cli.app import EXIT_OK, run

        out = tmp_path / "predict"
        assert run(["predict", "--gamma", "0.05", "--q", "20", "--output-dir", str(out)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["overparameterized"] is False
        assert report["band_lo"] == pytest.approx(0.5 - 0.05 - 0.05 ** 0.5)
        lines = (out / "asymptotic_log_crt0.csv").read_text().splitlines()
        assert lines[0] == "E,log_crt0_per_p"
        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert manifest["master_seed"] is None
