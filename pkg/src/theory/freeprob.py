# -*- coding: utf-8 -*-
"""
Limiting spectra of the conditioned Hessian ensemble.

C(x) is the free sum of a weighted Wishart matrix and a weighted GOE matrix,
with R-transforms

    R_W(z)   = 2r / (1 - 2 r gamma z)
    R_GOE(z) = 4 r^2 gamma x z

Inverting z = R_W(G) + R_GOE(G) + 1/G and clearing denominators gives the
cubic

    8 r^3 gamma^2 x G^3 - 2 r gamma (z + 2 r x) G^2 + (z - 2 r (1 - gamma)) G - 1 = 0

(a quadratic when x = 0, the scaled Marchenko-Pastur law). The Stieltjes
transform G(z) is the root with the most negative imaginary part for Im z > 0,
and the density is -Im G(lambda + i eps) / pi extrapolated to eps -> 0.

Densities are stored on a grid that clusters like cos(phi) toward the support
edges, with quadrature weights, so square-root edges and the 1/sqrt(lambda)
hard edge of the critical Marchenko-Pastur law integrate accurately.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize
import scipy.stats
from numpy.polynomial import Polynomial

from src.core.exceptions import BracketingError, NormalizationError
from src.core.log import get_logger

logger = get_logger("FreeProb")

EPSILONS = (1e-6, 1e-7)
DENSITY_FLOOR = 1e-8
MASS_TOL = 1e-4
DEFAULT_POINTS = 2000
_EDGE_SCAN_POINTS = 4000
_NEWTON_STEPS = 3


@dataclass(frozen=True)
class FreeModelParams:
    """
    Parameters of the limiting measure mu*_x.

    Attributes:
        gamma: Overparameterization factor p / (2m).
        r: Parameter-sharing multiplicity.
        x: Energy in normalized units (also written E).
    """

    gamma: float
    r: float = 1.0
    x: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma <= 0 or self.r < 1 or self.x < 0:
            raise ValueError(f"invalid free-model parameters {self}")


@dataclass(frozen=True)
class SpectralMeasure:
    """
    A probability measure on the real line: sampled density plus point atoms.

    Attributes:
        grid: Ascending sample points.
        density: Nonnegative density values on the grid.
        atoms: (location, mass) point masses.
        weights: Quadrature weights for integrating against the density.
    """

    grid: np.ndarray
    density: np.ndarray
    atoms: Tuple[Tuple[float, float], ...] = ()
    weights: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.weights is None:
            object.__setattr__(self, "weights", _trapezoid_weights(self.grid))

    @property
    def continuous_mass(self) -> float:
        return float(np.sum(self.weights * self.density))

    @property
    def mass(self) -> float:
        return self.continuous_mass + sum(mass for _, mass in self.atoms)

    def integrate(self, values: np.ndarray) -> float:
        """Integral of a function sampled on the grid (atoms excluded)."""
        return float(np.sum(self.weights * self.density * values))

    def mean(self) -> float:
        return self.integrate(self.grid) + sum(loc * mass for loc, mass in self.atoms)

    def log_integral(self, shift: float) -> float:
        """Integral of ln|lambda - shift| against the measure."""
        with np.errstate(divide="ignore"):
            total = self.integrate(np.log(np.abs(self.grid - shift)))
            for loc, mass in self.atoms:
                total += mass * np.log(abs(loc - shift))
        return float(total)

    def cdf(self, values) -> np.ndarray:
        """Distribution function, continuous part by cumulative quadrature."""
        cumulative = np.cumsum(self.weights * self.density)
        out = np.interp(values, self.grid, cumulative, left=0.0, right=cumulative[-1] if cumulative.size else 0.0)
        for loc, mass in self.atoms:
            out = out + mass * (np.asarray(values) >= loc)
        return out

    def ks_distance(self, samples: Sequence[float]) -> float:
        """Kolmogorov-Smirnov distance between samples and this measure."""
        return float(scipy.stats.kstest(np.asarray(samples).ravel(), self.cdf).statistic)


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    weights = np.zeros_like(grid, dtype=float)
    if grid.size > 1:
        steps = np.diff(grid)
        weights[:-1] += steps / 2.0
        weights[1:] += steps / 2.0
    return weights


def _edge_clustered(lo: float, hi: float, points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Midpoint rule in phi for lambda = lo + (hi - lo)(1 - cos phi)/2."""
    phi = (np.arange(points) + 0.5) * np.pi / points
    grid = lo + (hi - lo) * (1.0 - np.cos(phi)) / 2.0
    weights = (hi - lo) / 2.0 * np.sin(phi) * (np.pi / points)
    return grid, weights


# -- the cubic ------------------------------------------------------------------

def r_transform(g, params: FreeModelParams):
    """R_W(g) + R_GOE(g)."""
    gamma, r, x = params.gamma, params.r, params.x
    return 2.0 * r / (1.0 - 2.0 * r * gamma * g) + 4.0 * r * r * gamma * x * g


def cubic_coefficients(z, params: FreeModelParams) -> Tuple:
    """(a3, a2, a1, a0) of a3 G^3 + a2 G^2 + a1 G + a0 = 0."""
    gamma, r, x = params.gamma, params.r, params.x
    a3 = 8.0 * r ** 3 * gamma ** 2 * x
    a2 = -2.0 * r * gamma * (z + 2.0 * r * x)
    a1 = z - 2.0 * r * (1.0 - gamma)
    return a3, a2, a1, -1.0


def _quadratic_roots(a2, a1, a0) -> np.ndarray:
    disc = np.sqrt(a1 * a1 - 4.0 * a2 * a0 + 0j)
    # Stable form: avoid cancellation between -a1 and disc.
    sign = np.where(np.real(np.conj(a1) * disc) >= 0, 1.0, -1.0)
    big = -(a1 + sign * disc) / 2.0
    first = big / a2
    second = a0 / big
    return np.stack([first, second], axis=-1)


def _cardano_roots(a3, a2, a1, a0) -> np.ndarray:
    b = a2 / a3
    c = a1 / a3
    d = a0 / a3
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    root = np.sqrt(q * q / 4.0 + p ** 3 / 27.0 + 0j)
    u3 = -q / 2.0 + root
    u3_alt = -q / 2.0 - root
    u3 = np.where(np.abs(u3) >= np.abs(u3_alt), u3, u3_alt)
    u = np.power(u3 + 0j, 1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * omega ** k
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(uk) > 0, uk - p / (3.0 * uk), 0.0)
        roots.append(t - shift)
    return np.stack(roots, axis=-1)


def _polish(roots: np.ndarray, coefficients: Sequence) -> np.ndarray:
    a3, a2, a1, a0 = (np.asarray(c)[..., None] for c in coefficients)
    for _ in range(_NEWTON_STEPS):
        value = ((a3 * roots + a2) * roots + a1) * roots + a0
        slope = (3.0 * a3 * roots + 2.0 * a2) * roots + a1
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.abs(slope) > 0, value / slope, 0.0)
        roots = roots - step
    return roots


def cubic_roots(z, params: FreeModelParams) -> np.ndarray:
    """
    All roots of the Stieltjes polynomial at z (closed form plus Newton polish).

    Returns:
        Array of shape z.shape + (3,) for x > 0, z.shape + (2,) for x = 0.
    """
    z = np.asarray(z, dtype=complex)
    coefficients = cubic_coefficients(z, params)
    a3, a2, a1, a0 = coefficients
    if a3 == 0.0:
        roots = _quadratic_roots(a2, a1, np.full_like(z, a0))
    else:
        roots = _cardano_roots(np.full_like(z, a3), a2, a1, np.full_like(z, a0))
    return _polish(roots, (np.full_like(z, a3), a2, a1, np.full_like(z, a0)))


def stieltjes(z, params: FreeModelParams):
    """
    G*_x(z): the root with the most negative imaginary part for Im z >= 0.

    Points below the real axis are reflected, so G(conj z) = conj G(z).

    Args:
        z: Complex point(s).
        params: Model parameters.
    """
    z = np.asarray(z, dtype=complex)
    lower = z.imag < 0.0
    roots = cubic_roots(np.where(lower, np.conj(z), z), params)
    choice = np.argmin(roots.imag, axis=-1)
    selected = np.take_along_axis(roots, choice[..., None], axis=-1)[..., 0]
    selected = np.where(lower, np.conj(selected), selected)
    return selected if np.ndim(selected) else complex(selected)


def track_branch(grid: Sequence[float], params: FreeModelParams, eps: float = EPSILONS[0]) -> np.ndarray:
    """
    Continue the physical root along a grid by nearest-root tracking.

    Starts at the right end, where G is close to 1/z, and walks left.

    Returns:
        G on the grid (same order as given).
    """
    grid = np.asarray(grid, dtype=float)
    order = np.argsort(grid)[::-1]
    z = grid[order] + 1j * eps
    roots = cubic_roots(z, params)
    values = np.empty(z.size, dtype=complex)
    previous = 1.0 / z[0]
    for i in range(z.size):
        candidates = roots[i]
        previous = candidates[np.argmin(np.abs(candidates - previous))]
        values[i] = previous
    out = np.empty_like(values)
    out[order] = values
    return out


def _raw_density(lam: np.ndarray, params: FreeModelParams, eps: float) -> np.ndarray:
    return -np.imag(stieltjes(lam + 1j * eps, params)) / np.pi


def density_at(lam, params: FreeModelParams) -> np.ndarray:
    """Pointwise density with Richardson extrapolation over EPSILONS."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    e1, e2 = EPSILONS
    rho1 = _raw_density(lam, params, e1)
    rho2 = _raw_density(lam, params, e2)
    extrapolated = rho2 + (rho2 - rho1) * e2 / (e1 - e2)
    return np.clip(extrapolated, 0.0, None)


# -- support ---------------------------------------------------------------------

def discriminant_polynomial(params: FreeModelParams) -> Polynomial:
    """Discriminant of the Stieltjes polynomial as a polynomial in real lambda."""
    lam = Polynomial([0.0, 1.0])
    a3, a2, a1, a0 = cubic_coefficients(lam, params)
    if a3 == 0.0:
        return a1 * a1 - 4.0 * a2 * a0
    return 18.0 * a3 * a2 * a1 * a0 - 4.0 * a2 ** 3 * a0 + a2 ** 2 * a1 ** 2 - 4.0 * a3 * a1 ** 3 - 27.0 * a3 ** 2 * a0 ** 2


def support_bounds(params: FreeModelParams) -> Tuple[float, float]:
    """An interval guaranteed to contain the support (norm bounds of the two summands)."""
    gamma, r, x = params.gamma, params.r, params.x
    wishart_lo = 2.0 * r * (1.0 - np.sqrt(gamma)) ** 2 if gamma <= 1.0 else 0.0
    wishart_hi = 2.0 * r * (1.0 + np.sqrt(gamma)) ** 2
    goe_radius = 4.0 * r * np.sqrt(gamma * x)
    pad = 1e-3 * r
    return wishart_lo - goe_radius - pad, wishart_hi + goe_radius + pad


def support_intervals(params: FreeModelParams) -> List[Tuple[float, float]]:
    """
    Intervals where the density is positive.

    The density is positive exactly where the polynomial has a complex-conjugate
    root pair, i.e. where the discriminant is negative; the interval ends are the
    real roots of the discriminant.
    """
    lo, hi = support_bounds(params)
    disc = discriminant_polynomial(params)
    roots = disc.roots()
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))].real)
    points = [lo] + [float(v) for v in real if lo < v < hi] + [hi]
    intervals = []
    for left, right in zip(points[:-1], points[1:]):
        if right - left <= 1e-12:
            continue
        if disc((left + right) / 2.0) < 0.0:
            intervals.append((_refine_edge(disc, left), _refine_edge(disc, right)))
    return intervals


def _refine_edge(disc: Polynomial, guess: float) -> float:
    """Polish a discriminant root by bisection on its sign change near ``guess``."""
    width = 1e-6 * max(1.0, abs(guess))
    a, b = guess - width, guess + width
    if np.sign(disc(a)) == np.sign(disc(b)) or disc(a) == 0.0 or disc(b) == 0.0:
        return guess
    return float(scipy.optimize.bisect(disc, a, b, xtol=1e-14, rtol=1e-15))


def _has_zero_atom(params: FreeModelParams) -> bool:
    return params.x == 0.0 and params.gamma > 1.0


def density(params: FreeModelParams, points: int = DEFAULT_POINTS) -> SpectralMeasure:
    """
    The limiting spectral measure mu*_x.

    Args:
        params: Model parameters.
        points: Grid points per support interval (at least 2000).

    Returns:
        SpectralMeasure with an atom at 0 of mass 1 - 1/gamma when x = 0 and gamma > 1.

    Raises:
        NormalizationError: If the total mass misses 1 by more than 1e-4.
    """
    points = max(points, DEFAULT_POINTS)
    intervals = support_intervals(params)
    if not intervals:
        intervals = [support_bounds(params)]

    grids, weights = [], []
    for lo, hi in intervals:
        grid, weight = _edge_clustered(lo, hi, points)
        grids.append(grid)
        weights.append(weight)
    grid = np.concatenate(grids)
    weight = np.concatenate(weights)
    values = density_at(grid, params)

    atoms: Tuple[Tuple[float, float], ...] = ()
    if _has_zero_atom(params):
        atoms = ((0.0, 1.0 - 1.0 / params.gamma),)

    measure = SpectralMeasure(grid, values, atoms, weight)
    if abs(measure.mass - 1.0) > MASS_TOL:
        raise NormalizationError(
            "freeprob", f"mass {measure.mass:.6f} for {params}; grid or root selection is off"
        )
    return measure


def _edge_by_scan(params: FreeModelParams) -> float:
    """Smallest lambda with density above the floor, refined on the discriminant sign change."""
    lo, hi = support_bounds(params)
    grid = np.linspace(lo, hi, _EDGE_SCAN_POINTS)
    inside = np.flatnonzero(density_at(grid, params) > DENSITY_FLOOR)
    if inside.size == 0:
        raise NormalizationError("freeprob", f"no support found in [{lo:.4f}, {hi:.4f}] for {params}")
    first = int(inside[0])
    if first == 0:
        return float(grid[0])
    disc = discriminant_polynomial(params)
    a, b = float(grid[first - 1]), float(grid[first])
    if np.sign(disc(a)) == np.sign(disc(b)):
        return b
    return float(scipy.optimize.bisect(disc, a, b, xtol=1e-13))


def support_edge_min(params: FreeModelParams) -> float:
    """
    lambda*_{x,1}, the infimum of the support of mu*_x (atoms included).

    The density-threshold scan brackets the edge; bisection on the
    discriminant's sign change refines it. The discriminant-root locator is
    cross-checked and a disagreement beyond 1e-4 is logged.
    """
    edge = _edge_by_scan(params)
    intervals = support_intervals(params)
    if intervals and abs(intervals[0][0] - edge) > 1e-4:
        logger.warning(f"edge locators disagree for {params}: scan {edge:.6f}, roots {intervals[0][0]:.6f}")
    if _has_zero_atom(params):
        return min(0.0, edge)
    return edge


def band_edge_E0(gamma: float, r: float = 1.0) -> Optional[float]:
    """
    E0 solving lambda*_{E0,1} = 2 r E0, or None when gamma >= 1.

    Raises:
        BracketingError: If no sign change is found.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if gamma >= 1.0:
        return None

    def gap(energy: float) -> float:
        return support_edge_min(FreeModelParams(gamma, r, energy)) - 2.0 * r * energy

    upper = 0.5
    for _ in range(60):
        if gap(upper) < 0.0:
            break
        upper *= 2.0
    else:
        raise BracketingError("freeprob", f"no band edge bracket for gamma={gamma}")
    return float(scipy.optimize.bisect(gap, 0.0, upper, xtol=1e-10))


def asymptotic_log_crt0(E: float, gamma: float, r: float, q: int) -> float:
    """
    Leading-order (1/p) ln E[Crt_0(E)]:

        1/2 ln(pi q / (2 gamma)) + (1 - E)/(2 gamma) + 1/2 (1/gamma - 1) ln E
            + integral of ln|lambda/r - 2E| d mu*_E,

    or -inf when gamma >= 1 or lambda*_{E,1} / r < 2E.

    Raises:
        ValueError: If E <= 0.
    """
    if E <= 0:
        raise ValueError(f"energy must be positive, got {E}")
    if gamma >= 1.0:
        return float("-inf")
    params = FreeModelParams(gamma, r, E)
    if support_edge_min(params) / r < 2.0 * E:
        return float("-inf")
    measure = density(params)
    integral = measure.log_integral(2.0 * r * E) - np.log(r)
    return float(
        0.5 * np.log(np.pi * q / (2.0 * gamma))
        + (1.0 - E) / (2.0 * gamma)
        + 0.5 * (1.0 / gamma - 1.0) * np.log(E)
        + integral
    )


# -- closed forms ----------------------------------------------------------------

def mp_density(gamma: float, scale: float = 1.0, points: int = DEFAULT_POINTS) -> SpectralMeasure:
    """
    Marchenko-Pastur law of ratio gamma, scaled by ``scale``.

    Density sqrt((b - l)(l - a)) / (2 pi gamma l) on [(1 - sqrt g)^2, (1 + sqrt g)^2],
    plus an atom of mass 1 - 1/gamma at 0 when gamma > 1.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    a = (1.0 - np.sqrt(gamma)) ** 2
    b = (1.0 + np.sqrt(gamma)) ** 2
    grid, weights = _edge_clustered(a, b, points)
    values = np.sqrt(np.clip((b - grid) * (grid - a), 0.0, None)) / (2.0 * np.pi * gamma * grid)
    atoms = ((0.0, 1.0 - 1.0 / gamma),) if gamma > 1.0 else ()
    return SpectralMeasure(
        grid * scale,
        values / scale,
        tuple((loc * scale, mass) for loc, mass in atoms),
        weights * scale,
    )


def sc_density(radius: float = 2.0, points: int = DEFAULT_POINTS) -> SpectralMeasure:
    """Semicircle law on [-radius, radius]; radius 2 gives sqrt(4 - l^2) / (2 pi)."""
    grid, weights = _edge_clustered(-radius, radius, points)
    values = 2.0 * np.sqrt(np.clip(radius ** 2 - grid ** 2, 0.0, None)) / (np.pi * radius ** 2)
    return SpectralMeasure(grid, values, (), weights)


def mp_closed_form(lam, gamma: float, scale: float = 1.0) -> np.ndarray:
    """Pointwise Marchenko-Pastur density (continuous part) at ``lam``."""
    lam = np.asarray(lam, dtype=float) / scale
    a = (1.0 - np.sqrt(gamma)) ** 2
    b = (1.0 + np.sqrt(gamma)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.sqrt(np.clip((b - lam) * (lam - a), 0.0, None)) / (2.0 * np.pi * gamma * lam)
    return np.where((lam > a) & (lam < b), values, 0.0) / scale
