# -*- coding: utf-8 -*-
"""
Random-matrix ensembles behind the WHRF landscape.

    GOE             symmetric, diagonal ~ N(0, 2), off-diagonal ~ N(0, 1)
    real Wishart    G G^T with G a p x dof standard normal matrix
    C(x)            (r/m) (W + sqrt(2 m x) N), W ~ W_p(2m, I), N ~ GOE; the
                    Hessian spectrum at a critical point of energy x is
                    C(x) - 2 r x
    WHRF            F(theta) = m^-1 v(theta)^T J v(theta) with
                    v = (w_1 (x) ... (x) w_p)^(x) r, w_i = (cos theta_i, sin theta_i)
                    and J = X X^dagger a complex Wishart matrix of size 2^q

Only whrf_direct builds complex Gaussian factors; everything else stays in
the p-dimensional real reduction.
"""

from dataclasses import dataclass, field
from functools import reduce
from typing import List, Tuple

import numpy as np

from src.core.exceptions import DimensionError

# 2^14 rows of X is the largest explicit WHRF we build
MAX_WHRF_QUBITS = 14
MAX_DENSE_DIMENSION = 2048

_PHASE_VECTORS = {
    0: lambda c, s: np.array([c, s]),
    1: lambda c, s: np.array([-s, c]),
    2: lambda c, s: np.array([-c, -s]),
}


@dataclass(frozen=True)
class EnsembleParams:
    """
    Parameters of the conditioned-Hessian ensemble C(x).

    Attributes:
        p: Matrix dimension (parameter count).
        m: Wishart degrees of freedom (real; samplers use round(2m)).
        r: Parameter-sharing multiplicity.
        x: Conditioning energy in normalized units.
    """

    p: int
    m: float
    r: float = 1.0
    x: float = 0.0

    def __post_init__(self) -> None:
        if self.p < 1 or self.m < 1 or self.r < 1 or self.x < 0:
            raise ValueError(f"invalid ensemble parameters {self}")
        if self.p > MAX_DENSE_DIMENSION:
            raise DimensionError("randmat", f"p={self.p} exceeds the dense cap {MAX_DENSE_DIMENSION}")

    @property
    def gamma(self) -> float:
        return self.p / (2.0 * self.m)

    @property
    def dof(self) -> int:
        """Integer Wishart degrees of freedom, round(2m)."""
        return max(1, int(round(2.0 * self.m)))


def sample_goe(p: int, rng: np.random.Generator) -> np.ndarray:
    """GOE matrix with diagonal variance 2 and off-diagonal variance 1."""
    a = rng.standard_normal((p, p))
    return (a + a.T) / np.sqrt(2.0)


def sample_wishart_real(p: int, dof: int, rng: np.random.Generator) -> np.ndarray:
    """Real Wishart matrix W_p(dof, I) = G G^T."""
    if dof < 1:
        raise ValueError(f"Wishart degrees of freedom must be positive, got {dof}")
    g = rng.standard_normal((p, dof))
    return g @ g.T


def assemble_C(wishart: np.ndarray, goe: np.ndarray, params: EnsembleParams) -> np.ndarray:
    """(r/m) (W + sqrt(2 m x) N) from given components."""
    return (params.r / params.m) * (wishart + np.sqrt(2.0 * params.m * params.x) * goe)


def sample_C(params: EnsembleParams, rng: np.random.Generator) -> np.ndarray:
    """One draw of C(x) with independent W ~ W_p(round(2m), I) and N ~ GOE."""
    wishart = sample_wishart_real(params.p, params.dof, rng)
    goe = sample_goe(params.p, rng)
    return assemble_C(wishart, goe, params)


def sample_C_eigenvalues(params: EnsembleParams, draws: int, rng: np.random.Generator) -> np.ndarray:
    """
    Ascending eigenvalues of ``draws`` independent C(x) samples.

    Returns:
        Array of shape (draws, p).
    """
    out = np.empty((draws, params.p))
    for i in range(draws):
        out[i] = np.linalg.eigvalsh(sample_C(params, rng))
    return out


# -- explicit WHRF ---------------------------------------------------------------

class WhrfField:
    """
    A Wishart hypertoroidal random field built from explicit Gaussian factors.

    ``x_factor`` is the 2^q x m complex matrix X with i.i.d. standard complex
    normal entries (E|X|^2 = 1); J = X X^dagger is never formed.

    Attributes:
        p: Distinct parameter count.
        r: Occurrences of each parameter.
        m: Degrees of freedom (columns of X).
    """

    def __init__(self, x_factor: np.ndarray, p: int, r: int) -> None:
        q = p * r
        if x_factor.shape[0] != 1 << q:
            raise DimensionError("randmat", f"X needs 2^{q} rows, got {x_factor.shape[0]}")
        self.x_factor = x_factor
        self.p = p
        self.r = r
        self.m = x_factor.shape[1]

    @classmethod
    def sample(cls, p: int, m: int, r: int, rng: np.random.Generator) -> "WhrfField":
        q = p * r
        if q > MAX_WHRF_QUBITS:
            raise DimensionError("randmat", f"q = p*r = {q} exceeds the explicit cap {MAX_WHRF_QUBITS}")
        shape = (1 << q, m)
        x_factor = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
        return cls(x_factor, p, r)

    @property
    def q(self) -> int:
        return self.p * self.r

    def _slot(self, occurrence: int, param: int) -> int:
        return occurrence * self.p + param

    def _vector(self, theta: np.ndarray, orders: dict) -> np.ndarray:
        """Tensor product with slot t differentiated ``orders.get(t, 0)`` times."""
        factors = []
        for t in range(self.q):
            angle = theta[t % self.p]
            factors.append(_PHASE_VECTORS[orders.get(t, 0)](np.cos(angle), np.sin(angle)))
        return reduce(np.kron, factors)

    def _project(self, vector: np.ndarray) -> np.ndarray:
        return self.x_factor.T @ vector

    def _form(self, a: np.ndarray, b: np.ndarray) -> float:
        """Re(u^T J w) from projections a = X^T u, b = X^T w."""
        return float(np.real(np.sum(a * np.conj(b)))) / self.m

    def value(self, theta: np.ndarray) -> float:
        base = self._project(self._vector(np.asarray(theta, dtype=float), {}))
        return self._form(base, base)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        base = self._project(self._vector(theta, {}))
        grad = np.zeros(self.p)
        for i in range(self.p):
            d = sum(self._vector(theta, {self._slot(k, i): 1}) for k in range(self.r))
            grad[i] = 2.0 * self._form(base, self._project(d))
        return grad

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        base = self._project(self._vector(theta, {}))
        first = [
            self._project(sum(self._vector(theta, {self._slot(k, i): 1}) for k in range(self.r)))
            for i in range(self.p)
        ]
        hess = np.zeros((self.p, self.p))
        for i in range(self.p):
            for j in range(i, self.p):
                second = np.zeros(1 << self.q)
                for k in range(self.r):
                    for l in range(self.r):
                        s, t = self._slot(k, i), self._slot(l, j)
                        orders = {s: 2} if s == t else {s: 1, t: 1}
                        second = second + self._vector(theta, orders)
                hess[i, j] = hess[j, i] = 2.0 * (
                    self._form(first[i], first[j]) + self._form(base, self._project(second))
                )
        return hess

    def north_pole_derivatives(self) -> Tuple[float, np.ndarray, np.ndarray]:
        """
        Loss, gradient and Hessian at theta = 0 from the entries of J.

        At theta = 0 every w_i is the first basis vector, so v is basis index 0
        and differentiating slot t selects index 2^(q-1-t). With J_ab = X_a . conj(X_b):

            m dF_i      = 2 sum_k Re J[e(k,i), 0]
            m d2F_ij    = -2 r delta_ij J_00 + 2 sum_{k,l} Re J[e(k,i), e(l,j)]
                          + 2 sum_{distinct slots} Re J[e(k,i) + e(l,j), 0]
        """
        x = self.x_factor
        q = self.q

        def e(k: int, i: int) -> int:
            return 1 << (q - 1 - self._slot(k, i))

        def entry(a: int, b: int) -> float:
            return float(np.real(np.sum(x[a] * np.conj(x[b]))))

        j00 = entry(0, 0)
        grad = np.array([2.0 * sum(entry(e(k, i), 0) for k in range(self.r)) for i in range(self.p)])
        hess = np.zeros((self.p, self.p))
        for i in range(self.p):
            for j in range(i, self.p):
                total = -2.0 * self.r * j00 if i == j else 0.0
                for k in range(self.r):
                    for l in range(self.r):
                        a, b = e(k, i), e(l, j)
                        total += 2.0 * entry(a, b)
                        if a != b:
                            total += 2.0 * entry(a + b, 0)
                hess[i, j] = hess[j, i] = total
        return j00 / self.m, grad / self.m, hess / self.m


@dataclass(frozen=True)
class WhrfSample:
    """A sampled WHRF with its loss, gradient and Hessian at the north pole."""

    whrf: WhrfField = field(repr=False)
    loss: float
    gradient: np.ndarray
    hessian: np.ndarray


def whrf_direct(p_small: int, m: int, r: int, rng: np.random.Generator) -> WhrfSample:
    """
    Sample an explicit WHRF and differentiate it at theta = 0.

    Args:
        p_small: Distinct parameter count.
        m: Degrees of freedom.
        r: Occurrences per parameter; 2^(p_small * r) rows are built.
        rng: Caller-owned generator.

    Raises:
        DimensionError: If p_small * r exceeds the explicit cap.
    """
    whrf = WhrfField.sample(p_small, m, r, rng)
    loss, grad, hess = whrf.north_pole_derivatives()
    return WhrfSample(whrf, loss, grad, hess)


def whrf_losses(m: int, draws: int, rng: np.random.Generator) -> np.ndarray:
    """F(n) = J_00 / m for ``draws`` independent fields (only row 0 of X matters)."""
    row = (rng.standard_normal((draws, m)) + 1j * rng.standard_normal((draws, m))) / np.sqrt(2.0)
    return np.sum(np.abs(row) ** 2, axis=1) / m


def spectrum_samples(kind: str, params: EnsembleParams, draws: int, rng: np.random.Generator) -> List[np.ndarray]:
    """
    Eigenvalues of ``draws`` samples of a named ensemble.

    Args:
        kind: "goe" (N / sqrt(p)), "wishart" (W / (2m)) or "c" (C(x)).
    """
    spectra = []
    for _ in range(draws):
        if kind == "goe":
            matrix = sample_goe(params.p, rng) / np.sqrt(params.p)
        elif kind == "wishart":
            matrix = sample_wishart_real(params.p, params.dof, rng) / params.dof
        elif kind == "c":
            matrix = sample_C(params, rng)
        else:
            raise ValueError(f"unknown ensemble {kind!r}")
        spectra.append(np.linalg.eigvalsh(matrix))
    return spectra
