# -*- coding: utf-8 -*-
"""
Qubit Hamiltonians and their spectral statistics.

Builds the disordered spinless Fermi-Hubbard chain through the Jordan-Wigner
mapping, diagonalizes it on the dense path (n <= 12) and derives the
quantities the landscape theory is phrased in:

    lambda_min    ground energy
    lambda_mean   mean eigenvalue (trace / dim)
    nuclear_norm  ||H - lambda_min||_* = sum(lambda_i - lambda_min)
    frobenius_sq  ||H - lambda_mean||_F^2
    m             nuclear_norm^2 / frobenius_sq, the effective degrees of freedom
    c_vqa         lambda_mean - lambda_min, the energy normalization

Hopping on link i maps to -(T_i/2)(X_i X_{i+1} + Y_i Y_{i+1}); the density
interaction U_i n_i n_{i+1} maps to (U_i/4)(I - Z_i)(I - Z_{i+1}). Links are
0-indexed: link i couples qubits i and i+1.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse

from src.core.config import FermiHubbardSpec
from src.core.exceptions import DegenerateSpectrumError, DimensionError, SymmetryError
from src.quantum.pauli import PauliString, flip_permutation, z_signs

# Dense eigendecomposition cap: 2^12 = 4096
MAX_DENSE_QUBITS = 12

_ZERO_COEFFICIENT = 1e-14
_NUMBER_CONSERVATION_TOL = 1e-9


@dataclass(frozen=True)
class PauliSum:
    """
    A real-weighted sum of Hermitian Pauli strings, duplicates merged.

    Attributes:
        n: Qubit count.
        terms: (coefficient, operator) pairs; every operator has phase +1.
    """

    n: int
    terms: Tuple[Tuple[float, PauliString], ...]

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[float, PauliString]]) -> "PauliSum":
        """
        Merge terms on identical operators and drop vanishing coefficients.

        A phase of -1 on an operator is folded into its coefficient.

        Raises:
            DimensionError: If an operator has the wrong size.
            ValueError: If an operator has an imaginary phase.
        """
        merged: Dict[Tuple[int, int], float] = {}
        for coefficient, op in terms:
            if op.n != n:
                raise DimensionError("hamiltonian", f"term {op.label} does not act on {n} qubits")
            if not op.is_hermitian:
                raise ValueError(f"term {op.label} is not Hermitian")
            sign = -1.0 if op.phase == 2 else 1.0
            key = (op.x_mask, op.z_mask)
            merged[key] = merged.get(key, 0.0) + sign * float(coefficient)

        kept = tuple(
            (value, PauliString(n, x_mask, z_mask, 0))
            for (x_mask, z_mask), value in merged.items()
            if abs(value) > _ZERO_COEFFICIENT
        )
        return cls(n, kept)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise DimensionError("hamiltonian", f"size mismatch: {self.n} vs {other.n} qubits")
        return PauliSum.from_terms(self.n, self.terms + other.terms)

    def as_dict(self) -> Dict[str, float]:
        """Letters -> coefficient, for logs and goldens."""
        return {op.letters: coefficient for coefficient, op in self.terms}

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def identity_coefficient(self) -> float:
        """Coefficient of the identity, which equals trace(H) / 2^n."""
        return sum(c for c, op in self.terms if op.x_mask == 0 and op.z_mask == 0)

    @property
    def non_identity_terms(self) -> Tuple[Tuple[float, PauliString], ...]:
        return tuple((c, op) for c, op in self.terms if op.x_mask or op.z_mask)

    @property
    def term_count(self) -> int:
        """A, the number of terms in the Pauli decomposition of H - lambda_mean."""
        return len(self.non_identity_terms)

    @property
    def alpha_inf_norm(self) -> float:
        """Largest absolute non-identity coefficient."""
        return max((abs(c) for c, _ in self.non_identity_terms), default=0.0)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """H @ amplitudes via bit-mask Pauli application."""
        out = np.zeros_like(amplitudes, dtype=complex)
        for coefficient, op in self.terms:
            out += coefficient * op.apply(amplitudes)
        return out

    @cached_property
    def sparse_matrix(self) -> scipy.sparse.csr_matrix:
        """H as a CSR matrix, built once from the masks."""
        dim = self.dim
        columns = np.arange(dim, dtype=np.int64)
        rows, cols, data = [], [], []
        for coefficient, op in self.terms:
            coeff = coefficient * 1j ** (int(op.x_mask & op.z_mask).bit_count() % 4)
            rows.append(flip_permutation(self.n, op.x_mask))
            cols.append(columns)
            data.append(coeff * z_signs(self.n, op.z_mask))
        if not data:
            return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
        return scipy.sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )

    def to_dense(self) -> np.ndarray:
        """
        Dense 2^n x 2^n matrix.

        Raises:
            DimensionError: Beyond the dense-path cap.
        """
        if self.n > MAX_DENSE_QUBITS:
            raise DimensionError("hamiltonian", f"dense path limited to n <= {MAX_DENSE_QUBITS}, got {self.n}")
        return self.sparse_matrix.toarray()


@dataclass(frozen=True)
class SpectralStats:
    """
    Spectral statistics of a Hamiltonian (or of one of its sectors).

    Attributes:
        lambda_min: Ground energy.
        lambda_max: Largest eigenvalue.
        lambda_mean: Mean eigenvalue.
        nuclear_norm: ||H - lambda_min||_*.
        frobenius_sq: ||H - lambda_mean||_F^2.
        m: Effective degrees of freedom (real).
        dim: Dimension of the space the spectrum lives on.
    """

    lambda_min: float
    lambda_max: float
    lambda_mean: float
    nuclear_norm: float
    frobenius_sq: float
    m: float
    dim: int

    @property
    def c_vqa(self) -> float:
        """lambda_mean - lambda_min; normalized energies put lambda_mean at 1."""
        return self.lambda_mean - self.lambda_min

    @property
    def m_rounded(self) -> int:
        """m rounded to the nearest natural number, for Wishart samplers."""
        return max(1, int(round(self.m)))

    def gamma(self, p: int) -> float:
        """Overparameterization factor p / (2m)."""
        return p / (2.0 * self.m)

    def as_dict(self) -> Dict[str, float]:
        return {
            "dim": self.dim,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "lambda_mean": self.lambda_mean,
            "nuclear_norm": self.nuclear_norm,
            "frobenius_sq": self.frobenius_sq,
            "m": self.m,
            "m_rounded": self.m_rounded,
            "c_vqa": self.c_vqa,
        }


@dataclass(frozen=True)
class SectorHamiltonian:
    """
    H projected onto computational-basis states of fixed Hamming weight.

    Attributes:
        fermion_count: Hamming weight of the sector.
        basis: Full-space indices of the sector basis states, ascending.
        matrix: Dense sector block of H.
        stats: Spectral statistics within the sector.
    """

    fermion_count: int
    basis: np.ndarray
    matrix: np.ndarray
    stats: SpectralStats


@dataclass(frozen=True)
class MappingDiagnostics:
    """
    Quantities controlling how closely the VQA loss follows a WHRF.

    Attributes:
        term_count: A, number of non-identity Pauli terms.
        alpha_inf_norm: Largest absolute Pauli coefficient.
        frustration: f(n) = (lambda_mean - lambda_min) / ||alpha||_inf.
        convergence_rate: rho = lg(A) f(n) n / A.
    """

    term_count: int
    alpha_inf_norm: float
    frustration: float
    convergence_rate: float

    def as_dict(self) -> Dict[str, float]:
        return {
            "A": self.term_count,
            "alpha_inf_norm": self.alpha_inf_norm,
            "frustration": self.frustration,
            "convergence_rate": self.convergence_rate,
        }


def draw_disorder(spec: FermiHubbardSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-link hopping and interaction energies.

    Returns:
        (T, U), each of length n - 1, drawn from Normal(mean, disorder_variance).
    """
    rng = np.random.default_rng(spec.seed)
    std = np.sqrt(spec.disorder_variance)
    hopping = spec.t_mean + std * rng.standard_normal(spec.n - 1)
    interaction = spec.u_mean + std * rng.standard_normal(spec.n - 1)
    return hopping, interaction


def fermi_hubbard_groups(spec: FermiHubbardSpec) -> Dict[str, PauliSum]:
    """
    The Fermi-Hubbard Hamiltonian split into its three mutually commuting groups.

    Returns:
        {"coulomb": interaction terms, "even": hopping on even links,
         "odd": hopping on odd links}. Terms inside a group commute.
    """
    n = spec.n
    hopping, interaction = draw_disorder(spec)
    identity = PauliString.identity(n)

    coulomb = []
    hops: Dict[str, list] = {"even": [], "odd": []}
    for link in range(n - 1):
        left, right = link, link + 1
        quarter = interaction[link] / 4.0
        z_left = PauliString.single(n, left, "Z")
        z_right = PauliString.single(n, right, "Z")
        coulomb.extend([
            (quarter, identity),
            (-quarter, z_left),
            (-quarter, z_right),
            (quarter, z_left * z_right),
        ])

        half = -hopping[link] / 2.0
        group = hops["even" if link % 2 == 0 else "odd"]
        group.append((half, PauliString.single(n, left, "X") * PauliString.single(n, right, "X")))
        group.append((half, PauliString.single(n, left, "Y") * PauliString.single(n, right, "Y")))

    return {
        "coulomb": PauliSum.from_terms(n, coulomb),
        "even": PauliSum.from_terms(n, hops["even"]),
        "odd": PauliSum.from_terms(n, hops["odd"]),
    }


def build_fermi_hubbard(spec: FermiHubbardSpec) -> PauliSum:
    """
    Jordan-Wigner image of the disordered spinless Fermi-Hubbard chain.

    Args:
        spec: Chain size, means, disorder variance and seed.

    Returns:
        The Hamiltonian as a PauliSum.
    """
    groups = fermi_hubbard_groups(spec)
    return groups["coulomb"] + groups["even"] + groups["odd"]


def diagonalize(
    h: Union[PauliSum, np.ndarray],
    eigenvectors: bool = False,
) -> Union[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """
    Dense Hermitian eigendecomposition.

    Args:
        h: Hamiltonian as a PauliSum or dense matrix.
        eigenvectors: Also return the eigenvector matrix (columns).

    Returns:
        Ascending eigenvalues, or (eigenvalues, eigenvectors).

    Raises:
        DimensionError: Beyond the dense-path cap.
    """
    dense = h.to_dense() if isinstance(h, PauliSum) else np.asarray(h)
    if dense.shape[0] > 1 << MAX_DENSE_QUBITS:
        raise DimensionError("hamiltonian", f"dense path limited to dimension {1 << MAX_DENSE_QUBITS}")
    if eigenvectors:
        return scipy.linalg.eigh(dense)
    return scipy.linalg.eigh(dense, eigvals_only=True)


def spectral_stats(eigs: Sequence[float]) -> SpectralStats:
    """
    Spectral statistics from a dense spectrum.

    Args:
        eigs: Eigenvalues (any order).

    Returns:
        SpectralStats.

    Raises:
        DegenerateSpectrumError: For an empty or constant spectrum.
    """
    values = np.sort(np.asarray(eigs, dtype=float))
    if values.size == 0:
        raise DegenerateSpectrumError("hamiltonian", "empty spectrum")
    lambda_min = float(values[0])
    lambda_max = float(values[-1])
    spread = lambda_max - lambda_min
    if spread <= 1e-12 * max(1.0, abs(lambda_max), abs(lambda_min)):
        raise DegenerateSpectrumError("hamiltonian", f"constant spectrum of dimension {values.size}")

    lambda_mean = float(values.mean())
    nuclear = float(np.sum(values - lambda_min))
    frobenius_sq = float(np.sum((values - lambda_mean) ** 2))
    return SpectralStats(
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        lambda_mean=lambda_mean,
        nuclear_norm=nuclear,
        frobenius_sq=frobenius_sq,
        m=nuclear ** 2 / frobenius_sq,
        dim=int(values.size),
    )


def hamming_weights(n: int) -> np.ndarray:
    """Hamming weight of every basis index 0 .. 2^n - 1."""
    index = np.arange(1 << n, dtype=np.int64)
    weights = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        weights += (index >> j) & 1
    return weights


def restrict_to_sector(h: Union[PauliSum, np.ndarray], fermion_count: int) -> SectorHamiltonian:
    """
    Project H onto the fixed-fermion-number sector.

    Args:
        h: Hamiltonian (PauliSum or dense matrix).
        fermion_count: Hamming weight selecting the sector.

    Returns:
        SectorHamiltonian with the dense block and its stats.

    Raises:
        SymmetryError: If H couples different Hamming weights.
        DimensionError: If the sector does not exist.
        DegenerateSpectrumError: If the sector spectrum is constant.
    """
    dense = h.to_dense() if isinstance(h, PauliSum) else np.asarray(h)
    n = int(dense.shape[0]).bit_length() - 1
    if not 0 <= fermion_count <= n:
        raise DimensionError("hamiltonian", f"no sector with {fermion_count} fermions on {n} sites")

    weights = hamming_weights(n)
    mixing = np.abs(dense) * (weights[:, None] != weights[None, :])
    leak = float(mixing.max()) if mixing.size else 0.0
    if leak > _NUMBER_CONSERVATION_TOL:
        raise SymmetryError("hamiltonian", f"H does not conserve fermion number (coupling {leak:.3e})")

    basis = np.flatnonzero(weights == fermion_count)
    block = dense[np.ix_(basis, basis)]
    stats = spectral_stats(scipy.linalg.eigh(block, eigvals_only=True))
    return SectorHamiltonian(fermion_count, basis, block, stats)


def mapping_diagnostics(h: PauliSum, stats: Optional[SpectralStats] = None) -> MappingDiagnostics:
    """
    Frustration ratio and convergence-rate proxy of the VQA-to-WHRF mapping.

    Args:
        h: Hamiltonian.
        stats: Its full-space stats; computed when omitted.
    """
    if stats is None:
        stats = spectral_stats(diagonalize(h))
    term_count = h.term_count
    alpha = h.alpha_inf_norm
    frustration = stats.c_vqa / alpha if alpha > 0 else float("inf")
    rate = (
        np.log2(term_count) * frustration * h.n / term_count if term_count > 1 else 0.0
    )
    return MappingDiagnostics(term_count, alpha, float(frustration), float(rate))
