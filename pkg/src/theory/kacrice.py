# -*- coding: utf-8 -*-
"""
Expected critical-point counts of a WHRF by Monte Carlo over the Kac-Rice formula.

For index k at normalized energy E,

    ln E[Crt_k(E)] = (p/2) ln(pi/r) - ln Gamma(m) + (1 + gamma) m ln m
                     + ((1 - gamma) m - 1) ln E - m E
                     + ln E_{C(E)}[ prod_i |lambda_i - 2rE| ; lambda_{k+1} >= 2rE ]

with gamma = p / (2m). The expectation is estimated in log space: each trial
contributes sum_i ln|lambda_i - 2rE| (or -inf when the indicator fails) and
the trials are reduced with logsumexp.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from src.core.exceptions import LandscapeError
from src.core.log import get_logger
from src.theory.freeprob import band_edge_E0
from src.theory.randmat import EnsembleParams, assemble_C, sample_goe, sample_wishart_real

logger = get_logger("KacRice")

# Entries of sampled Gaussian factors held in memory per batch
_BATCH_ENTRIES = 1 << 22


@dataclass(frozen=True)
class CrtEstimate:
    """
    Monte Carlo estimate of ln E[Crt_k(E)].

    Attributes:
        E: Normalized energy.
        k: Hessian index.
        log_value: Estimate of the natural log; -inf when no trial passed.
        mc_std_error: Standard error of log_value (delta method); inf when no trial passed.
        trials: Trial count.
        acceptance_fraction: Share of trials passing the eigenvalue indicator.
    """

    E: float
    k: int
    log_value: float
    mc_std_error: float
    trials: int
    acceptance_fraction: float


@dataclass(frozen=True)
class BandProfile:
    """
    ln E[Crt_k] over an energy grid.

    Attributes:
        estimates: One CrtEstimate per grid energy.
        empirical_edge: Last grid energy with nonzero acceptance (None if none).
        predicted_edge: E0 from the free-probability solver (None when gamma >= 1).
    """

    estimates: List[CrtEstimate]
    empirical_edge: Optional[float]
    predicted_edge: Optional[float]

    @property
    def energies(self) -> np.ndarray:
        return np.array([estimate.E for estimate in self.estimates])

    @property
    def log_values(self) -> np.ndarray:
        return np.array([estimate.log_value for estimate in self.estimates])


def hessian_closed_form_sample(x: float, p: int, m: float, r: float, rng: np.random.Generator) -> np.ndarray:
    """
    Hessian at a critical point of normalized energy x.

    Samples W ~ W_p(round(2m), I) and N ~ GOE and returns
    -2 r x I + (r/m) (W + sqrt(2 m x) N).
    """
    params = EnsembleParams(p, m, r, x)
    wishart = sample_wishart_real(p, params.dof, rng)
    goe = sample_goe(p, rng)
    return assemble_C(wishart, goe, params) - 2.0 * r * x * np.eye(p)


def log_prefactor(E: float, p: int, m: float, r: float) -> float:
    """The deterministic part of ln E[Crt_k(E)]."""
    gamma = p / (2.0 * m)
    return float(
        0.5 * p * np.log(np.pi / r)
        - gammaln(m)
        + (1.0 + gamma) * m * np.log(m)
        + ((1.0 - gamma) * m - 1.0) * np.log(E)
        - m * E
    )


def _trial_terms(E: float, k: int, params: EnsembleParams, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Per-trial sum_i ln|lambda_i - 2rE|, -inf where lambda_{k+1} < 2rE."""
    p, dof = params.p, params.dof
    shift = 2.0 * params.r * E
    scale = params.r / params.m
    noise = np.sqrt(2.0 * params.m * params.x)

    g = rng.standard_normal((trials, p, dof))
    a = rng.standard_normal((trials, p, p))
    wishart = g @ np.swapaxes(g, 1, 2)
    goe = (a + np.swapaxes(a, 1, 2)) / np.sqrt(2.0)
    eigenvalues = np.linalg.eigvalsh(scale * (wishart + noise * goe))

    with np.errstate(divide="ignore"):
        terms = np.sum(np.log(np.abs(eigenvalues - shift)), axis=1)
    accepted = eigenvalues[:, k] >= shift
    return np.where(accepted, terms, -np.inf)


def log_crt_k_mc(
    E: float,
    k: int,
    p: int,
    m: float,
    r: float,
    trials: int,
    rng: np.random.Generator,
    threads: int = 1,
) -> CrtEstimate:
    """
    Monte Carlo estimate of ln E[Crt_k(E)].

    Args:
        E: Normalized energy, positive.
        k: Hessian index, below p.
        p: Parameter count.
        m: Degrees of freedom (real).
        r: Parameter-sharing multiplicity.
        trials: Monte Carlo trials.
        rng: Caller-owned generator; batches draw from spawned child streams.
        threads: Worker cap for batch evaluation.

    Returns:
        CrtEstimate. All trials rejected gives log_value -inf, acceptance 0.
    """
    if E <= 0:
        raise ValueError(f"energy must be positive, got {E}")
    if not 0 <= k < p:
        raise ValueError(f"index k={k} must lie in [0, {p})")
    if trials < 1:
        raise ValueError("need at least one trial")

    params = EnsembleParams(p, m, r, E)
    batch = max(1, min(trials, _BATCH_ENTRIES // (p * max(p, params.dof))))
    sizes = [batch] * (trials // batch) + ([trials % batch] if trials % batch else [])
    streams = rng.spawn(len(sizes))

    def run(i: int) -> np.ndarray:
        return _trial_terms(E, k, params, sizes[i], streams[i])

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    terms = np.concatenate(parts)

    accepted = np.isfinite(terms)
    acceptance = float(np.mean(accepted))
    if not accepted.any():
        return CrtEstimate(E, k, float("-inf"), float("inf"), trials, 0.0)

    log_mean = float(logsumexp(terms) - np.log(trials))
    weights = np.exp(terms - np.max(terms[accepted]))
    mean = float(np.mean(weights))
    if trials > 1:
        std_error = float(np.std(weights, ddof=1) / np.sqrt(trials) / mean)
    else:
        std_error = float("inf")
    return CrtEstimate(E, k, log_prefactor(E, p, m, r) + log_mean, std_error, trials, acceptance)


def crt_band_profile(
    k: int,
    p: int,
    m: float,
    r: float,
    E_grid: Sequence[float],
    trials: int,
    rng: np.random.Generator,
    threads: int = 1,
) -> BandProfile:
    """
    ln E[Crt_k] on an energy grid, with empirical and predicted band edges.

    Raises:
        ValueError: If a grid energy lies outside (0, 1).
    """
    grid = np.asarray(E_grid, dtype=float)
    if np.any((grid <= 0.0) | (grid >= 1.0)):
        raise ValueError("energy grid must lie in (0, 1)")

    streams = rng.spawn(grid.size)
    estimates = [
        log_crt_k_mc(float(E), k, p, m, r, trials, stream, threads)
        for E, stream in zip(grid, streams)
    ]
    accepted = [estimate.E for estimate in estimates if estimate.acceptance_fraction > 0.0]
    empirical = max(accepted) if accepted else None

    gamma = p / (2.0 * m)
    try:
        predicted = band_edge_E0(gamma, r)
    except LandscapeError as e:
        logger.warning(f"band edge unavailable for gamma={gamma:.4f}: {e}")
        predicted = None
    return BandProfile(estimates, empirical, predicted)


def log_crt_cumulative(profile: BandProfile) -> np.ndarray:
    """
    ln of the expected critical-point count in [E_first, E] for every grid E.

    Trapezoid rule in log space over the profile's grid; the first entry is -inf.
    """
    energies = profile.energies
    logs = profile.log_values
    out = np.full(energies.size, -np.inf)
    for i in range(1, energies.size):
        width = energies[i] - energies[i - 1]
        segment = np.logaddexp(logs[i], logs[i - 1]) + math.log(width / 2.0)
        out[i] = np.logaddexp(out[i - 1], segment)
    return out
