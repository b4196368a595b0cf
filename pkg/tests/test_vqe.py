# -*- coding: utf-8 -*-
"""
Tests for ansatz construction, training and the experiment harness.
"""

import sys
from math import comb
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def smoke_config(**overrides):
    from src.core.config import ExperimentConfig

    raw = {
        "hamiltonian": {"n": 4, "seed": 0},
        "family": "random",
        "p": 4,
        "instances": 3,
        "master_seed": 5,
        "training": {"max_iters": 300, "tol": 1e-6},
    }
    raw.update(overrides)
    return ExperimentConfig(**raw)


class TestAnsatz:
    """Tests for the ansatz builders."""

    def test_random_ansatz_layout(self):
        """Test q = p r rotations with interleaved parameter indices and no identity generators."""
        from src.services.ansatz import build_random_ansatz

        program = build_random_ansatz(5, 4, 3, seed=1)
        assert program.q == 12
        assert program.r == 3
        assert [rot.param_index for rot in program.rotations] == [k % 4 for k in range(12)]
        assert all(not rot.generator.is_identity for rot in program.rotations)
        assert program.is_periodic

    def test_random_ansatz_seeded(self):
        """Test that the generator draw depends only on the seed."""
        from src.services.ansatz import build_random_ansatz

        a = build_random_ansatz(4, 6, 1, seed=10)
        b = build_random_ansatz(4, 6, 1, seed=10)
        c = build_random_ansatz(4, 6, 1, seed=11)
        assert a.rotations == b.rotations
        assert a.rotations != c.rotations

    def test_hva_parameter_count(self):
        """Test p = 3 layers f and the half-filled initial state."""
        from src.core.config import FermiHubbardSpec
        from src.services.ansatz import build_hva_ansatz

        spec = FermiHubbardSpec(n=8)
        assert build_hva_ansatz(spec, layers=6, f=1).p == 18
        program = build_hva_ansatz(spec, layers=6, f=2)
        assert program.p == 36
        assert program.initial_state.bits == "11110000"
        assert not program.is_periodic

    def test_hva_split_too_fine(self):
        """Test that f above the smallest group size raises ConfigurationError."""
        from src.core.config import FermiHubbardSpec
        from src.core.exceptions import ConfigurationError
        from src.services.ansatz import build_hva_ansatz

        with pytest.raises(ConfigurationError):
            build_hva_ansatz(FermiHubbardSpec(n=4), layers=1, f=3)

    def test_hva_conserves_fermion_number(self):
        """Test that the HVA state stays in the half-filled sector."""
        from src.core.config import FermiHubbardSpec
        from src.quantum.hamiltonian import hamming_weights
        from src.quantum.simulator import prepare
        from src.services.ansatz import build_hva_ansatz

        program = build_hva_ansatz(FermiHubbardSpec(n=6, seed=2), layers=2, f=1)
        state = prepare(program, np.random.default_rng(0).uniform(-1, 1, program.p))
        outside = np.abs(state.amplitudes[hamming_weights(6) != 3])
        assert outside.max() < 1e-12

    def test_hva_split_with_equal_parameters(self):
        """Test that f = 2 with each sub-group parameter repeated reproduces the f = 1 state."""
        from src.core.config import FermiHubbardSpec
        from src.quantum.simulator import prepare
        from src.services.ansatz import build_hva_ansatz

        spec = FermiHubbardSpec(n=8, seed=1)
        theta = np.random.default_rng(2).uniform(-np.pi, np.pi, 6)
        whole = prepare(build_hva_ansatz(spec, layers=2, f=1), theta)
        split = prepare(build_hva_ansatz(spec, layers=2, f=2), np.repeat(theta, 2))
        assert np.allclose(split.amplitudes, whole.amplitudes, atol=1e-10)

    def test_hva_training_stays_in_sector(self):
        """Test that every iterate of an HVA run keeps all weight in the half-filled sector."""
        from src.core.config import FermiHubbardSpec, TrainingConfig
        from src.quantum.hamiltonian import build_fermi_hubbard, diagonalize, hamming_weights, spectral_stats
        from src.quantum.simulator import prepare
        from src.services.ansatz import build_hva_ansatz
        from src.services.trainer import train

        spec = FermiHubbardSpec(n=4, seed=3)
        h = build_fermi_hubbard(spec)
        program = build_hva_ansatz(spec, layers=2, f=1)
        inside = hamming_weights(4) == 2
        weights = []

        def record(iteration, params):
            probabilities = np.abs(prepare(program, params).amplitudes) ** 2
            weights.append(probabilities[inside].sum())

        train(program, h, spectral_stats(diagonalize(h)), TrainingConfig(max_iters=60, seed=1), callback=record)
        assert len(weights) > 0
        assert np.allclose(weights, 1.0, atol=1e-8)

    def test_registry(self):
        """Test that both families are registered and bad classes are refused."""
        from src.core.interfaces import ANSATZ_FAMILIES, register_ansatz_family
        from src.services.ansatz import HvaAnsatzBuilder, RandomAnsatzBuilder

        assert ANSATZ_FAMILIES["random"] is RandomAnsatzBuilder
        assert ANSATZ_FAMILIES["hva"] is HvaAnsatzBuilder
        with pytest.raises(TypeError):
            register_ansatz_family("bogus", dict)
        with pytest.raises(ValueError):
            register_ansatz_family("random", HvaAnsatzBuilder)


class TestTrainer:
    """Tests for momentum gradient descent."""

    def setup_problem(self):
        from src.core.config import FermiHubbardSpec
        from src.quantum.hamiltonian import build_fermi_hubbard, diagonalize, spectral_stats
        from src.services.ansatz import build_random_ansatz

        h = build_fermi_hubbard(FermiHubbardSpec(n=4, seed=0))
        return h, spectral_stats(diagonalize(h)), build_random_ansatz(4, 8, 1, seed=2)

    def test_descends_and_halts(self):
        """Test that training lowers the loss, stays above 0 and halts on tol."""
        from src.core.config import TrainingConfig
        from src.services.trainer import HaltReason, train

        h, stats, program = self.setup_problem()
        result = train(program, h, stats, TrainingConfig(max_iters=20000, tol=1e-6, seed=3))
        assert result.final_normalized_energy < result.initial_normalized_energy
        assert result.final_normalized_energy >= -1e-9
        assert result.halt_reason == HaltReason.TOL
        assert result.final_gradient_norm <= 1e-3
        assert result.trajectory_iterations[0] == 0
        assert result.trajectory_iterations[-1] == result.iterations_used

    def test_tol_halt_needs_small_gradient(self):
        """Test that a stalled loss with a large gradient does not halt on tol."""
        from src.core.config import TrainingConfig
        from src.services.trainer import HaltReason, train

        h, stats, program = self.setup_problem()
        result = train(program, h, stats, TrainingConfig(max_iters=20000, tol=1.0, seed=5))
        assert result.halt_reason == HaltReason.TOL
        assert result.iterations_used > 1
        assert result.final_gradient_norm <= 1e-3
        strict = train(program, h, stats, TrainingConfig(max_iters=50, tol=1.0, grad_tol=1e-12, seed=5))
        assert strict.halt_reason == HaltReason.MAX_ITERS
        assert strict.iterations_used == 50

    def test_max_iters(self):
        """Test that the iteration cap halts with max_iters."""
        from src.core.config import TrainingConfig
        from src.services.trainer import HaltReason, train

        h, stats, program = self.setup_problem()
        result = train(program, h, stats, TrainingConfig(max_iters=3, tol=1e-12))
        assert result.iterations_used == 3
        assert result.halt_reason == HaltReason.MAX_ITERS

    def test_deterministic(self):
        """Test that equal inputs give bit-identical results."""
        from src.core.config import TrainingConfig
        from src.services.trainer import train

        h, stats, program = self.setup_problem()
        cfg = TrainingConfig(max_iters=200, seed=4)
        a = train(program, h, stats, cfg)
        b = train(program, h, stats, cfg)
        assert np.array_equal(a.final_params, b.final_params)
        assert a.final_normalized_energy == b.final_normalized_energy

    def test_callback_and_wrapping(self):
        """Test that the callback sees every iteration with angles in [-pi, pi)."""
        from src.core.config import TrainingConfig
        from src.services.trainer import train

        h, stats, program = self.setup_problem()
        seen = []

        def record(iteration, params):
            seen.append(iteration)
            assert np.all(params >= -np.pi) and np.all(params < np.pi)

        result = train(program, h, stats, TrainingConfig(max_iters=20, tol=1e-12), callback=record)
        assert seen == list(range(1, result.iterations_used + 1))

    def test_nan_aborts(self):
        """Test that a non-finite loss raises TrainingAbortedError."""
        from src.core.exceptions import TrainingAbortedError
        from src.services.trainer import train

        _, stats, program = self.setup_problem()
        poisoned = np.full((16, 16), np.nan)
        with pytest.raises(TrainingAbortedError) as info:
            train(program, poisoned, stats)
        assert info.value.iteration == 0

    def test_wrong_init_length(self):
        """Test that a wrong-length starting point raises DimensionError."""
        from src.core.exceptions import DimensionError
        from src.services.trainer import train

        h, stats, program = self.setup_problem()
        with pytest.raises(DimensionError):
            train(program, h, stats, init_params=[0.0, 0.0])


class TestExperiment:
    """Tests for the experiment harness."""

    def test_rows_ordered_and_thread_independent(self):
        """Test that results are identical for one and three workers."""
        from src.services.experiment import run_experiment

        cfg = smoke_config()
        serial = run_experiment(cfg, threads=1)
        parallel = run_experiment(cfg, threads=3)
        assert [row.instance for row in serial.rows] == [0, 1, 2]
        assert [row.as_row() for row in serial.rows] == [row.as_row() for row in parallel.rows]

    def test_instances_differ(self):
        """Test that instances draw different ansatzes."""
        from src.services.experiment import run_experiment

        result = run_experiment(smoke_config())
        assert len({row.ansatz_seed for row in result.rows}) == 3
        assert all(0.0 <= row.final_normalized_energy for row in result.rows)

    def test_failed_instance_recorded(self):
        """Test that a failing instance becomes an error row and the batch continues."""
        from src.core.exceptions import TrainingAbortedError
        from src.services import experiment

        real_train = experiment.train
        calls = {"count": 0}

        def flaky(*args, **kwargs):
            calls["count"] += 1
            if calls["count"] == 2:
                raise TrainingAbortedError("non-finite loss or gradient", 7)
            return real_train(*args, **kwargs)

        with patch.object(experiment, "train", side_effect=flaky):
            result = experiment.run_experiment(smoke_config())
        failed = [row for row in result.rows if row.failed]
        assert len(failed) == 1
        assert failed[0].halt_reason.startswith("error: ")
        assert len(result.final_energies()) == 2

    def test_hva_uses_half_filled_sector(self):
        """Test that the HVA normalizes with the n/2 sector statistics."""
        from src.services.experiment import run_experiment

        cfg = smoke_config(family="hva", p=None, layers=1, instances=2)
        result = run_experiment(cfg)
        assert result.stats.dim == comb(4, 2)
        assert result.rows[0].p == 3

    def test_paired_control_matches_gamma(self):
        """Test that the HVA control is a Clifford-start random ansatz at the closest gamma."""
        from src.services.experiment import ExperimentRunner

        cfg = smoke_config(family="hva", p=None, layers=2, instances=2, paired_control=True)
        result = ExperimentRunner(cfg).run()
        control = result.control
        assert control is not None and control.control is None
        assert control.config.family.value == "random"
        assert control.config.initial_state.value == "clifford"
        assert control.config.master_seed == cfg.master_seed
        assert len(control.rows) == 2

        gamma = result.prediction.gamma
        p = control.config.p
        gap = abs(control.stats.gamma(p) - gamma)
        assert gap <= abs(control.stats.gamma(p + 1) - gamma)
        if p > 1:
            assert gap <= abs(control.stats.gamma(p - 1) - gamma)
        assert control.stats.dim == 16 and result.stats.dim == comb(4, 2)

    def test_fraction_below_band_center(self):
        """Test the share of minima below the middle of the predicted band."""
        from src.services.experiment import run_experiment

        result = run_experiment(smoke_config())
        lo, hi = result.prediction.band
        energies = result.final_energies()
        assert result.fraction_below_band_center() == pytest.approx(np.mean(energies < 0.5 * (lo + hi)))
        assert result.summary()["fraction_below_band_center"] == result.fraction_below_band_center()
        assert "control" not in result.summary()

    def test_predict_band(self):
        """Test the band prediction in both regimes."""
        from src.services.experiment import predict_band

        over = predict_band(1.5)
        assert over.band is None and over.band_edge is None and over.cch_mode is None
        under = predict_band(0.01)
        assert under.band == pytest.approx((0.39, 0.59))
        assert 0.0 < under.cch_mode < 0.5

    def test_seed_streams(self):
        """Test that seed streams differ by index and by purpose."""
        from src.utils.seeding import Stream, derive_seed

        assert derive_seed(0, 0, Stream.ANSATZ) != derive_seed(0, 1, Stream.ANSATZ)
        assert derive_seed(0, 0, Stream.ANSATZ) != derive_seed(0, 0, Stream.INIT_PARAMS)
        assert derive_seed(3, 2, Stream.TRIALS) == derive_seed(3, 2, Stream.TRIALS)


@pytest.mark.slow
class TestShippedConfigs:
    """End-to-end runs of the shipped experiment configs."""

    def test_smoke_config(self):
        """Test the shipped smoke experiment with its own training settings."""
        from src.core.config import ExperimentConfig, load_run_config
        from src.services.experiment import run_experiment

        cfg = load_run_config(str(project_root / "config" / "experiments" / "smoke.yaml"), ExperimentConfig)
        result = run_experiment(cfg, threads=2)
        assert len(result.rows) == cfg.instances
        assert not any(row.failed for row in result.rows)
        assert all(row.final_normalized_energy < row.initial_normalized_energy for row in result.rows)

    def test_random_p48_band_overlap(self):
        """Test that at least 85% of a reduced p = 48 batch lands in the predicted band."""
        from src.core.config import ExperimentConfig, load_run_config
        from src.services.experiment import run_experiment

        cfg = load_run_config(str(project_root / "config" / "experiments" / "random_p48.yaml"), ExperimentConfig)
        assert cfg.initial_state.value == "clifford"
        result = run_experiment(cfg.model_copy(update={"instances": 12}), threads=4)
        assert not any(row.failed for row in result.rows)
        assert result.fraction_in_band() >= 0.85
