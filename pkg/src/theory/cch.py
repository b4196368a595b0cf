# -*- coding: utf-8 -*-
"""
Small-gamma limit of the local-minima energy density.

For gamma << 1 the density of local minima is, up to O(sqrt(gamma)) shifts,

    f(E | gamma, m) ~ (exp(-E) E^(1 - gamma) (1 - 2E)^gamma)^m,   0 < E < 1/2,

a compound confluent hypergeometric shape peaked near 1/2 - gamma.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from src.core.log import get_logger

logger = get_logger("CCH")

_OPEN_EDGE = 1e-12


@dataclass(frozen=True)
class CchParams:
    """
    Attributes:
        gamma: Overparameterization factor, in (0, 1).
        m: Degrees of freedom, at least 1.
    """

    gamma: float
    m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.m < 1.0:
            raise ValueError(f"m must be at least 1, got {self.m}")


@dataclass(frozen=True)
class CchMoments:
    """Normalization constant (log), mean and standard deviation of the density."""

    log_normalizer: float
    mean: float
    std: float


def cch_log_density(E: float, params: CchParams) -> float:
    """Unnormalized log density; -inf outside (0, 1/2)."""
    if not 0.0 < E < 0.5:
        return -math.inf
    g = params.gamma
    return params.m * (-E + (1.0 - g) * math.log(E) + g * math.log(1.0 - 2.0 * E))


def _stationarity(E: float, gamma: float) -> float:
    return -1.0 + (1.0 - gamma) / E - 2.0 * gamma / (1.0 - 2.0 * E)


def cch_mode(params: CchParams) -> float:
    """
    Argmax of the density on (0, 1/2).

    The stationarity condition is monotone decreasing on the interval, so a
    bracketing root solve is exact up to tolerance. Independent of m.
    """
    return float(brentq(_stationarity, _OPEN_EDGE, 0.5 - _OPEN_EDGE, args=(params.gamma,), xtol=1e-14))


def cch_mode_closed_form(gamma: float) -> float:
    """Root of 2E^2 - 3E + (1 - gamma) = 0 inside (0, 1/2)."""
    return (3.0 - math.sqrt(1.0 + 8.0 * gamma)) / 4.0


def _integrate(fn, params: CchParams, mode: float) -> float:
    value, _ = quad(fn, 0.0, 0.5, points=[mode], limit=400, epsabs=0.0, epsrel=1e-11)
    return value


def cch_moments(params: CchParams) -> CchMoments:
    """Normalizer, mean and standard deviation by adaptive quadrature around the mode."""
    mode = cch_mode(params)
    peak = cch_log_density(mode, params)

    def weight(E: float) -> float:
        return math.exp(cch_log_density(E, params) - peak)

    z = _integrate(weight, params, mode)
    mean = _integrate(lambda E: E * weight(E), params, mode) / z
    second = _integrate(lambda E: (E - mean) ** 2 * weight(E), params, mode) / z
    return CchMoments(peak + math.log(z), mean, math.sqrt(second))


def cch_density(E, params: CchParams) -> np.ndarray:
    """Normalized density at one or many energies."""
    log_z = cch_moments(params).log_normalizer
    energies = np.atleast_1d(np.asarray(E, dtype=float))
    values = np.array([math.exp(cch_log_density(e, params) - log_z) for e in energies])
    return values if np.ndim(E) else float(values[0])


def predicted_band(gamma: float) -> Tuple[float, float]:
    """(max(0, 1/2 - gamma - sqrt(gamma)), 1/2 - gamma + sqrt(gamma))."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    root = math.sqrt(gamma)
    return max(0.0, 0.5 - gamma - root), 0.5 - gamma + root


def width_scaling_exponent(gamma: float, m_small: float, m_large: float) -> float:
    """
    Measured exponent a in std ~ m^-a between two degrees of freedom.

    A Laplace expansion of the log density gives a = 1/2; the value is
    reported rather than assumed.
    """
    if m_large <= m_small:
        raise ValueError("m_large must exceed m_small")
    std_small = cch_moments(CchParams(gamma, m_small)).std
    std_large = cch_moments(CchParams(gamma, m_large)).std
    exponent = math.log(std_small / std_large) / math.log(m_large / m_small)
    logger.debug(f"gamma={gamma}: std {std_small:.3e} -> {std_large:.3e}, exponent {exponent:.3f}")
    return exponent
