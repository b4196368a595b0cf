# -*- coding: utf-8 -*-
"""
Experiment harness: many independent VQE training instances on one Hamiltonian.

The runner draws the disordered Hamiltonian once, computes the spectral
statistics the landscape theory needs (in the half-filled sector for the
HVA), then trains ``instances`` independent runs. Each instance derives
its ansatz seed and starting point from (master seed, instance index), so
results are identical for any worker count.

An HVA experiment with ``paired_control`` also trains random-ansatz instances
on the same Hamiltonian at the closest matching gamma.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.core.config import AnsatzFamily, ExperimentConfig, InitialStateKind
from src.core.exceptions import LandscapeError
from src.core.interfaces import ANSATZ_FAMILIES, AnsatzBuilder
from src.core.log import get_logger
from src.quantum.hamiltonian import (
    PauliSum,
    SpectralStats,
    build_fermi_hubbard,
    diagonalize,
    restrict_to_sector,
    spectral_stats,
)
from src.services import ansatz as _ansatz  # noqa: F401  registers the ansatz families
from src.services.trainer import IterationCallback, TrainingResult, random_initial_params, train
from src.theory.cch import CchParams, cch_mode, predicted_band
from src.theory.freeprob import band_edge_E0
from src.utils.seeding import Stream, derive_generator, derive_seed

logger = get_logger("Experiment")

CSV_COLUMNS = (
    "instance",
    "p",
    "gamma",
    "final_normalized_energy",
    "iterations",
    "halt_reason",
    "initial_normalized_energy",
    "ansatz_seed",
)


@dataclass(frozen=True)
class InstanceRow:
    """One training instance's outcome, as written to the results CSV."""

    instance: int
    p: int
    gamma: float
    final_normalized_energy: float
    iterations: int
    halt_reason: str
    initial_normalized_energy: float
    ansatz_seed: int

    @property
    def failed(self) -> bool:
        return self.halt_reason.startswith("error")

    def as_row(self) -> Tuple:
        return tuple(getattr(self, column) for column in CSV_COLUMNS)


@dataclass(frozen=True)
class BandPrediction:
    """
    Where the landscape theory expects local minima for this experiment.

    Attributes:
        gamma: Overparameterization factor p / (2m).
        band: The 1/2 - gamma +- sqrt(gamma) band, clamped at 0; None when gamma >= 1.
        band_edge: E0 from the free-probability solver; None when gamma >= 1.
        cch_mode: Mode of the small-gamma local-minima density; None when gamma >= 1.
    """

    gamma: float
    band: Optional[Tuple[float, float]]
    band_edge: Optional[float]
    cch_mode: Optional[float]

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "band_lo": None if self.band is None else self.band[0],
            "band_hi": None if self.band is None else self.band[1],
            "band_edge_E0": self.band_edge,
            "cch_mode": self.cch_mode,
        }


@dataclass
class ExperimentResult:
    """All rows of an experiment plus the statistics they are judged against."""

    config: ExperimentConfig
    stats: SpectralStats
    prediction: BandPrediction
    rows: List[InstanceRow] = field(default_factory=list)
    wall_clock_seconds: float = 0.0
    control: Optional["ExperimentResult"] = None

    def final_energies(self) -> np.ndarray:
        return np.array([row.final_normalized_energy for row in self.rows if not row.failed])

    def fraction_in_band(self) -> Optional[float]:
        """Share of successful instances whose final energy lies in the predicted band."""
        energies = self.final_energies()
        if self.prediction.band is None or energies.size == 0:
            return None
        lo, hi = self.prediction.band
        return float(np.mean((energies >= lo) & (energies <= hi)))

    def fraction_below(self, threshold: float) -> Optional[float]:
        energies = self.final_energies()
        if energies.size == 0:
            return None
        return float(np.mean(energies < threshold))

    def fraction_below_band_center(self) -> Optional[float]:
        """Share of successful instances below the middle of the predicted band."""
        if self.prediction.band is None:
            return None
        lo, hi = self.prediction.band
        return self.fraction_below(0.5 * (lo + hi))

    def summary(self) -> dict:
        """The summary.json payload, including the paired control when one ran."""
        summary = {
            "p": self.config.parameter_count,
            "stats": self.stats.as_dict(),
            "prediction": self.prediction.as_dict(),
            "fraction_in_band": self.fraction_in_band(),
            "fraction_below_band_center": self.fraction_below_band_center(),
            "failed_instances": sum(row.failed for row in self.rows),
        }
        if self.control is not None:
            summary["control"] = self.control.summary()
        return summary


def matched_random_p(gamma: float, m: float) -> int:
    """Random-ansatz parameter count with p / (2m) closest to gamma."""
    return max(1, int(round(2.0 * m * gamma)))


def predict_band(gamma: float, r: int = 1) -> BandPrediction:
    """Band, band edge and CCH mode for an overparameterization factor."""
    if gamma >= 1.0:
        return BandPrediction(gamma, None, None, None)
    try:
        edge = band_edge_E0(gamma, r)
    except LandscapeError as e:
        logger.warning(f"band edge unavailable for gamma={gamma:.4f}: {e}")
        edge = None
    return BandPrediction(gamma, predicted_band(gamma), edge, cch_mode(CchParams(gamma, 1.0)))


class ExperimentRunner:
    """
    Runs an ExperimentConfig.

    Attributes:
        config: The experiment to run.
        threads: Worker cap for parallel instances.
    """

    def __init__(self, config: ExperimentConfig, threads: int = 1) -> None:
        self.config = config
        self.threads = max(1, threads)
        self.hamiltonian: Optional[PauliSum] = None
        self.stats: Optional[SpectralStats] = None
        self.builder: Optional[AnsatzBuilder] = None

    def prepare(self) -> None:
        """Build the Hamiltonian, its statistics and the ansatz builder (once)."""
        if self.hamiltonian is not None:
            return
        spec = self.config.hamiltonian
        self.hamiltonian = build_fermi_hubbard(spec)
        if self.config.family == AnsatzFamily.HVA:
            self.stats = restrict_to_sector(self.hamiltonian, spec.n // 2).stats
        else:
            self.stats = spectral_stats(diagonalize(self.hamiltonian))
        # Warm the shared sparse matrix before workers read it.
        _ = self.hamiltonian.sparse_matrix
        self.builder = ANSATZ_FAMILIES[self.config.family.value].from_config(self.config)
        if not self.builder.redraws_per_instance:
            self.builder.build(0)
        logger.info(
            f"n={spec.n} family={self.config.family.value} p={self.config.parameter_count} "
            f"m={self.stats.m:.3f} gamma={self.stats.gamma(self.config.parameter_count):.4f}"
        )

    def train_instance(self, index: int, callback: Optional[IterationCallback] = None) -> TrainingResult:
        """
        Train one instance with its derived ansatz seed and starting point.

        Raises:
            LandscapeError: From ansatz construction or training.
        """
        self.prepare()
        ansatz_seed = derive_seed(self.config.master_seed, index, Stream.ANSATZ)
        program = self.builder.build(ansatz_seed)
        init = random_initial_params(
            self.config.parameter_count, derive_generator(self.config.master_seed, index, Stream.INIT_PARAMS)
        )
        return train(program, self.hamiltonian, self.stats, self.config.training, init, callback)

    def _run_instance(self, index: int) -> InstanceRow:
        p = self.config.parameter_count
        gamma = self.stats.gamma(p)
        ansatz_seed = derive_seed(self.config.master_seed, index, Stream.ANSATZ)
        try:
            result = self.train_instance(index)
        except LandscapeError as e:
            logger.warning(f"instance {index} failed: {e}")
            return InstanceRow(index, p, gamma, math.nan, 0, f"error: {e.message}", math.nan, ansatz_seed)

        logger.info(
            f"instance {index}: E={result.final_normalized_energy:.5f} "
            f"after {result.iterations_used} iterations ({result.halt_reason.value})"
        )
        return InstanceRow(
            instance=index,
            p=p,
            gamma=gamma,
            final_normalized_energy=result.final_normalized_energy,
            iterations=result.iterations_used,
            halt_reason=result.halt_reason.value,
            initial_normalized_energy=result.initial_normalized_energy,
            ansatz_seed=ansatz_seed,
        )

    def run(self) -> ExperimentResult:
        """
        Train every instance.

        Returns:
            ExperimentResult with rows ordered by instance index.
        """
        started = time.perf_counter()
        self.prepare()
        indices = range(self.config.instances)
        if self.threads == 1:
            rows = [self._run_instance(i) for i in indices]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                rows = list(pool.map(self._run_instance, indices))

        gamma = self.stats.gamma(self.config.parameter_count)
        r = self.config.r if self.config.family == AnsatzFamily.RANDOM else 1
        result = ExperimentResult(
            config=self.config,
            stats=self.stats,
            prediction=predict_band(gamma, r),
            rows=rows,
            wall_clock_seconds=time.perf_counter() - started,
        )
        in_band = result.fraction_in_band()
        if in_band is not None:
            logger.info(f"{in_band:.1%} of minima inside the predicted band {result.prediction.band}")
        if self.config.paired_control:
            result.control = ExperimentRunner(self.control_config(gamma), self.threads).run()
            result.wall_clock_seconds = time.perf_counter() - started
        return result

    def control_config(self, gamma: float) -> ExperimentConfig:
        """
        Random-ansatz experiment on the same Hamiltonian at the nearest matching gamma.

        The random family normalizes with full-space statistics, so its p is
        matched against the full-space m.
        """
        self.prepare()
        full = spectral_stats(diagonalize(self.hamiltonian))
        raw = self.config.model_dump(exclude={"layers", "f", "paired_control"})
        raw.update(
            family=AnsatzFamily.RANDOM,
            p=matched_random_p(gamma, full.m),
            initial_state=InitialStateKind.CLIFFORD,
        )
        return ExperimentConfig(**raw)


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Run an experiment config; see ExperimentRunner."""
    return ExperimentRunner(cfg, threads).run()
