# -*- coding: utf-8 -*-
"""
Command handlers.

Each handler takes a validated config plus a RunContext, does its work
through the library modules and returns what the CLI prints. Handlers that
write files create the output directory only after their computation
succeeded and finish by writing a manifest that lists every artifact.
"""

import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

import numpy as np

from src import __version__
from src.cli.schemas import HamiltonianReport, PredictionReport, RunManifest
from src.core.config import CrtConfig, Ensemble, ExperimentConfig, FermiHubbardSpec, PredictConfig, SpectrumConfig
from src.core.log import get_logger
from src.quantum.hamiltonian import (
    build_fermi_hubbard,
    diagonalize,
    mapping_diagnostics,
    restrict_to_sector,
    spectral_stats,
)
from src.services.experiment import CSV_COLUMNS, ExperimentRunner, predict_band
from src.theory.checks import loss_histogram_check, mgf_compare, mgf_domain_limit
from src.theory.freeprob import FreeModelParams, asymptotic_log_crt0, density, mp_density, sc_density
from src.theory.kacrice import crt_band_profile, log_crt_cumulative
from src.theory.randmat import EnsembleParams, spectrum_samples
from src.utils.io import prepare_output_dir, write_csv, write_json, write_manifest
from src.utils.plot_script import write_histogram_script
from src.utils.seeding import Stream, derive_generator

logger = get_logger("CLI")

OVERPARAMETERIZED_MESSAGE = "no positive-energy local minima (overparameterized)"
CRT_COLUMNS = ("E", "k", "log_value", "stderr", "acceptance", "asymptotic_log_value")


@dataclass
class RunContext:
    """
    Where and how a command runs.

    Attributes:
        output_dir: Directory for artifacts.
        threads: Worker cap.
    """

    output_dir: str
    threads: int = 1


def _finish(
    command: str,
    config,
    seed: Optional[int],
    ctx: RunContext,
    out: Path,
    artifacts: List[Path],
    started: float,
    options: Optional[dict] = None,
) -> RunManifest:
    manifest = RunManifest(
        command=command,
        config=config.model_dump(mode="json"),
        master_seed=seed,
        threads=ctx.threads,
        artifacts=[str(path) for path in artifacts],
        options=options or {},
        version=__version__,
        wall_clock_seconds=time.perf_counter() - started,
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    path = write_manifest(out, manifest.model_dump())
    logger.info(f"{command}: wrote {len(artifacts)} artifacts and {path}")
    return manifest


def cmd_hamiltonian(
    spec: FermiHubbardSpec,
    p: Optional[int] = None,
    sector: Optional[int] = None,
    validate: bool = False,
    draws: int = 2000,
    ctx: Optional[RunContext] = None,
) -> HamiltonianReport:
    """
    Spectral statistics and mapping diagnostics of a Fermi-Hubbard instance.

    With ``validate`` the loss-histogram and MGF checks run on the full-space
    spectrum (p defaults to 20 for the histogram).
    """
    h = build_fermi_hubbard(spec)
    eigs = diagonalize(h)
    full_stats = spectral_stats(eigs)
    stats = full_stats if sector is None else restrict_to_sector(h, sector).stats
    report = HamiltonianReport(
        n=spec.n,
        sector=sector,
        stats=stats.as_dict(),
        diagnostics=mapping_diagnostics(h, full_stats).as_dict(),
        p=p,
        gamma=None if p is None else stats.gamma(p),
    )
    if validate:
        threads = ctx.threads if ctx is not None else 1
        histogram = loss_histogram_check(
            h, full_stats, p or 20, draws, derive_generator(spec.seed, 0, Stream.TRIALS), threads=threads
        )
        x_max = min(2.0, 0.5 * mgf_domain_limit(eigs))
        mgf = mgf_compare(eigs, np.linspace(0.0, x_max, 21))
        report.validation = {
            "loss_histogram": histogram.as_dict(),
            "mgf_max_relative_deviation": mgf.max_relative_deviation,
            "mgf_x_max": x_max,
        }
    return report


def cmd_experiment(cfg: ExperimentConfig, ctx: RunContext) -> RunManifest:
    """
    Run every instance and write results.csv, summary.json, plot_histogram.py and the manifest.

    A paired control adds control_results.csv. The output directory is only
    created once the run finished without a numerical failure.
    """
    started = time.perf_counter()
    result = ExperimentRunner(cfg, ctx.threads).run()
    out = prepare_output_dir(ctx.output_dir)

    csv_path = write_csv(out / "results.csv", CSV_COLUMNS, (row.as_row() for row in result.rows))
    artifacts = [csv_path]
    if result.control is not None:
        control_rows = (row.as_row() for row in result.control.rows)
        artifacts.append(write_csv(out / "control_results.csv", CSV_COLUMNS, control_rows))
    artifacts.append(write_json(out / "summary.json", result.summary()))
    title = f"{cfg.family.value} ansatz, n={cfg.hamiltonian.n}, p={cfg.parameter_count}"
    artifacts.append(write_histogram_script(out / "plot_histogram.py", csv_path.name, title, result.prediction.band))
    return _finish("experiment", cfg, cfg.master_seed, ctx, out, artifacts, started)


def cmd_train(cfg: ExperimentConfig, ctx: RunContext, instance: int = 0) -> RunManifest:
    """Train one instance and write its decimated energy trajectory."""
    started = time.perf_counter()
    runner = ExperimentRunner(cfg, ctx.threads)
    result = runner.train_instance(instance)
    out = prepare_output_dir(ctx.output_dir)

    trajectory = write_csv(
        out / "trajectory.csv",
        ("iteration", "normalized_energy"),
        zip(result.trajectory_iterations.tolist(), result.energy_trajectory.tolist()),
    )
    summary = write_json(out / "result.json", {
        "instance": instance,
        "final_normalized_energy": result.final_normalized_energy,
        "initial_normalized_energy": result.initial_normalized_energy,
        "iterations": result.iterations_used,
        "halt_reason": result.halt_reason.value,
        "final_gradient_norm": result.final_gradient_norm,
        "final_params": result.final_params.tolist(),
        "stats": runner.stats.as_dict(),
    })
    return _finish("train", cfg, cfg.master_seed, ctx, out, [trajectory, summary], started, {"instance": instance})


def _predict_gamma(cfg: PredictConfig) -> float:
    if cfg.gamma is not None:
        return cfg.gamma
    h = build_fermi_hubbard(cfg.hamiltonian)
    if cfg.sector is not None:
        stats = restrict_to_sector(h, cfg.sector).stats
    else:
        stats = spectral_stats(diagonalize(h))
    return stats.gamma(cfg.p)


def cmd_predict(cfg: PredictConfig, ctx: RunContext) -> PredictionReport:
    """
    Band, band edge, CCH mode and the asymptotic local-minima curve.

    For gamma >= 1 nothing is written and the report says so.
    """
    started = time.perf_counter()
    gamma = _predict_gamma(cfg)
    if gamma >= 1.0:
        return PredictionReport(gamma=gamma, overparameterized=True, message=OVERPARAMETERIZED_MESSAGE)

    prediction = predict_band(gamma, cfg.r)
    report = PredictionReport(
        gamma=gamma,
        overparameterized=False,
        message=f"local minima expected in [{prediction.band[0]:.4f}, {prediction.band[1]:.4f}]",
        band_lo=prediction.band[0],
        band_hi=prediction.band[1],
        band_edge_E0=prediction.band_edge,
        cch_mode=prediction.cch_mode,
    )
    if prediction.band_edge is not None:
        energies = np.linspace(0.0, prediction.band_edge, cfg.energies + 1)[1:]
        rows = [(float(E), asymptotic_log_crt0(float(E), gamma, cfg.r, cfg.q)) for E in energies]
        out = prepare_output_dir(ctx.output_dir)
        curve = write_csv(out / "asymptotic_log_crt0.csv", ("E", "log_crt0_per_p"), rows)
        report.curve_path = str(curve)
        summary = write_json(out / "prediction.json", report.model_dump())
        _finish("predict", cfg, None, ctx, out, [curve, summary], started)
    return report


def cmd_crt(cfg: CrtConfig, ctx: RunContext) -> RunManifest:
    """Monte Carlo ln E[Crt_k(E)] profile with cumulative counts."""
    started = time.perf_counter()
    grid = np.linspace(cfg.e_min, cfg.e_max, cfg.points)
    trials_rng = derive_generator(cfg.seed, 0, Stream.TRIALS)
    profile = crt_band_profile(cfg.k, cfg.p, cfg.m, cfg.r, grid, cfg.trials, trials_rng, ctx.threads)
    gamma = cfg.p / (2.0 * cfg.m)

    # Leading-order count scaled back by p, for index 0 with gamma < 1 only
    def asymptotic(E: float) -> Optional[float]:
        if cfg.k != 0 or gamma >= 1.0:
            return None
        return cfg.p * asymptotic_log_crt0(E, gamma, cfg.r, cfg.p * cfg.r)

    rows = [
        (e.E, e.k, e.log_value, e.mc_std_error, e.acceptance_fraction, asymptotic(e.E))
        for e in profile.estimates
    ]
    out = prepare_output_dir(ctx.output_dir)
    profile_path = write_csv(out / "crt_profile.csv", CRT_COLUMNS, rows)
    cumulative_path = write_csv(
        out / "crt_cumulative.csv",
        ("E", "log_cumulative"),
        zip(profile.energies.tolist(), log_crt_cumulative(profile).tolist()),
    )
    edges = write_json(out / "band_edges.json", {
        "empirical_edge": profile.empirical_edge,
        "predicted_edge": profile.predicted_edge,
        "gamma": gamma,
    })
    return _finish("crt", cfg, cfg.seed, ctx, out, [profile_path, cumulative_path, edges], started)


def cmd_spectrum(cfg: SpectrumConfig, ctx: RunContext) -> RunManifest:
    """Sampled eigenvalues of an ensemble next to its limiting density."""
    started = time.perf_counter()
    params = EnsembleParams(cfg.p, cfg.m, cfg.r, cfg.x)
    spectra = spectrum_samples(cfg.ensemble.value, params, cfg.draws, np.random.default_rng(cfg.seed))
    out = prepare_output_dir(ctx.output_dir)
    samples = write_csv(
        out / "eigenvalues.csv",
        ("draw", "index", "eigenvalue"),
        ((d, i, float(value)) for d, values in enumerate(spectra) for i, value in enumerate(values)),
    )

    if cfg.ensemble == Ensemble.GOE:
        measure = sc_density()
    elif cfg.ensemble == Ensemble.WISHART:
        measure = mp_density(cfg.p / params.dof)
    else:
        measure = density(FreeModelParams(params.gamma, cfg.r, cfg.x))
    limit = write_csv(out / "limit_density.csv", ("lambda", "density"), zip(measure.grid.tolist(), measure.density.tolist()))
    ks = measure.ks_distance(np.concatenate(spectra))
    logger.info(f"KS distance of {cfg.draws} draws to the limiting law: {ks:.4f}")
    stats = write_json(out / "spectrum.json", {"ks_distance": ks, "atoms": [list(a) for a in measure.atoms]})
    return _finish("spectrum", cfg, cfg.seed, ctx, out, [samples, limit, stats], started)
