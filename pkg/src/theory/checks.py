# -*- coding: utf-8 -*-
"""
Empirical checks that a randomized VQA loss behaves like a WHRF.

Two comparisons:

    moment-generating functions   M_XHX(x) = e^x prod_i (1 - 2^-n h~_i x)^-1
                                  M_WHRF(x) = (1 - x/m)^-m
                                  with h~ = (h - lambda_mean) / (lambda_mean - lambda_min)
    loss histograms               normalized energies at a fixed parameter vector
                                  over fresh random ansatzes, tested against Gamma(m, 1/m)
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats as scistats

from src.core.log import get_logger
from src.quantum.hamiltonian import PauliSum, SpectralStats, spectral_stats
from src.quantum.simulator import InitialState, energy, normalized_energy, prepare
from src.services.ansatz import build_random_ansatz

logger = get_logger("Checks")

SOFT_GATE_P_VALUE = 1e-3


@dataclass(frozen=True)
class MgfComparison:
    """
    Both moment-generating functions on a grid.

    Attributes:
        x_grid: Evaluation points.
        mgf_xhx: M_XHX on the grid.
        mgf_whrf: M_WHRF on the grid.
        max_relative_deviation: max |M_XHX / M_WHRF - 1| over the grid.
    """

    x_grid: np.ndarray
    mgf_xhx: np.ndarray
    mgf_whrf: np.ndarray
    max_relative_deviation: float


@dataclass(frozen=True)
class HistogramReport:
    """
    KS comparison of sampled normalized losses with Gamma(m, 1/m).

    Attributes:
        statistic: KS statistic.
        p_value: KS p-value.
        draws: Sample count.
        m: Shape parameter used.
        sample_mean: Mean of the samples (1 in expectation).
        sample_variance: Variance of the samples (1/m in expectation).
    """

    statistic: float
    p_value: float
    draws: int
    m: float
    sample_mean: float
    sample_variance: float

    @property
    def passed(self) -> bool:
        return self.p_value > SOFT_GATE_P_VALUE

    def as_dict(self) -> dict:
        return {
            "ks_statistic": self.statistic,
            "ks_p_value": self.p_value,
            "draws": self.draws,
            "m": self.m,
            "sample_mean": self.sample_mean,
            "sample_variance": self.sample_variance,
            "passed": self.passed,
        }


def _scaled_spectrum(eigs: Sequence[float]) -> np.ndarray:
    """2^-n h~_i for a dense spectrum of dimension 2^n."""
    values = np.asarray(eigs, dtype=float)
    s = spectral_stats(values)
    return (values - s.lambda_mean) / s.c_vqa / values.size


def log_mgf_xhx(x: np.ndarray, eigs: Sequence[float]) -> np.ndarray:
    scaled = _scaled_spectrum(eigs)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return x - np.sum(np.log1p(-np.outer(x, scaled)), axis=1)


def log_mgf_whrf(x: np.ndarray, m: float) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return -m * np.log1p(-x / m)


def mgf_domain_limit(eigs: Sequence[float], m: Optional[float] = None) -> float:
    """Supremum of x where both MGFs are finite."""
    scaled = _scaled_spectrum(eigs)
    if m is None:
        m = spectral_stats(eigs).m
    top = float(np.max(scaled))
    return min(m, 1.0 / top) if top > 0 else m


def mgf_compare(eigs: Sequence[float], x_grid: Sequence[float], m: Optional[float] = None) -> MgfComparison:
    """
    Evaluate M_XHX and M_WHRF on a grid.

    Args:
        eigs: Dense spectrum of H.
        x_grid: Evaluation points.
        m: Degrees of freedom; defaults to the spectrum's own m.

    Raises:
        ValueError: If a grid point lies outside the domain of either MGF.
    """
    grid = np.asarray(x_grid, dtype=float)
    scaled = _scaled_spectrum(eigs)
    if m is None:
        m = spectral_stats(eigs).m
    if np.any(grid >= m):
        raise ValueError(f"x must stay below m={m:.4f}")
    if np.any(1.0 - np.outer(grid, scaled) <= 0.0):
        raise ValueError("x outside the domain of M_XHX")

    xhx = np.exp(log_mgf_xhx(grid, eigs))
    whrf = np.exp(log_mgf_whrf(grid, m))
    deviation = float(np.max(np.abs(xhx / whrf - 1.0))) if grid.size else 0.0
    return MgfComparison(grid, xhx, whrf, deviation)


def mgf_cumulants(eigs: Sequence[float], order: int = 4, m: Optional[float] = None):
    """
    Cumulants kappa_1 .. kappa_order of both laws.

    XHX: kappa_1 = 1 + sum s_i, kappa_j = (j-1)! sum s_i^j with s = 2^-n h~.
    WHRF: kappa_j = (j-1)! m^(1-j).

    Returns:
        (xhx cumulants, whrf cumulants) as arrays of length ``order``.
    """
    scaled = _scaled_spectrum(eigs)
    if m is None:
        m = spectral_stats(eigs).m
    xhx = np.array([math.factorial(j - 1) * np.sum(scaled ** j) for j in range(1, order + 1)])
    xhx[0] += 1.0
    whrf = np.array([math.factorial(j - 1) * m ** (1 - j) for j in range(1, order + 1)])
    return xhx, whrf


def xhx_loss_samples(eigs: Sequence[float], draws: int, rng: np.random.Generator) -> np.ndarray:
    """F_XHX at a fixed point: 1 + sum_i 2^-n h~_i |X_i|^2 with |X_i|^2 ~ Exp(1)."""
    scaled = _scaled_spectrum(eigs)
    return 1.0 + rng.exponential(size=(draws, scaled.size)) @ scaled


def _gamma_report(samples: np.ndarray, m: float) -> HistogramReport:
    result = scistats.kstest(samples, scistats.gamma(a=m, scale=1.0 / m).cdf)
    report = HistogramReport(
        statistic=float(result.statistic),
        p_value=float(result.pvalue),
        draws=int(samples.size),
        m=m,
        sample_mean=float(np.mean(samples)),
        sample_variance=float(np.var(samples, ddof=1)) if samples.size > 1 else 0.0,
    )
    if not report.passed:
        logger.warning(f"KS p-value {report.p_value:.2e} below {SOFT_GATE_P_VALUE:g} (m={m:.3f}, draws={report.draws})")
    else:
        logger.info(f"KS statistic {report.statistic:.4f}, p-value {report.p_value:.3f}")
    return report


def xhx_histogram_check(eigs: Sequence[float], draws: int, rng: np.random.Generator) -> HistogramReport:
    """KS test of sampled XHX losses against Gamma(m, 1/m)."""
    return _gamma_report(xhx_loss_samples(eigs, draws, rng), spectral_stats(eigs).m)


def loss_histogram_check(
    h: PauliSum,
    stats: SpectralStats,
    p: int,
    draws: int,
    rng: np.random.Generator,
    params: Optional[Sequence[float]] = None,
    r: int = 1,
    threads: int = 1,
) -> HistogramReport:
    """
    Normalized losses at one parameter vector over fresh random ansatzes.

    Each draw samples new Pauli generators and a random stabilizer initial
    state, then evaluates the normalized energy at ``params``.

    Args:
        h: Hamiltonian.
        stats: Its spectral statistics.
        p: Distinct parameter count.
        draws: Ansatz draws.
        rng: Caller-owned generator; all per-draw seeds come from it up front.
        params: Fixed parameter vector; uniform on [-pi, pi)^p when omitted.
        r: Rotations per parameter.
        threads: Worker cap.

    Returns:
        HistogramReport against Gamma(m, 1/m). A p-value below the soft gate
        is logged as a warning, not raised.
    """
    if params is None:
        params = rng.uniform(-np.pi, np.pi, size=p)
    params = np.asarray(params, dtype=float)
    seeds = rng.integers(0, 2 ** 63 - 1, size=(draws, 2))
    matrix = h.sparse_matrix

    def draw(i: int) -> float:
        initial = InitialState("clifford", seed=int(seeds[i, 1]))
        program = build_random_ansatz(h.n, p, r, int(seeds[i, 0]), initial)
        return normalized_energy(energy(prepare(program, params), matrix), stats)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = np.array(list(pool.map(draw, range(draws))))
    else:
        samples = np.array([draw(i) for i in range(draws)])
    return _gamma_report(samples, stats.m)
