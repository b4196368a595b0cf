# -*- coding: utf-8 -*-
"""
Dense statevector engine for Pauli-rotation ansatzes.

States are prepared as products of rotations exp(-i theta_k g_k) applied to an
initial state, each rotation costing O(2^n) through bit-mask permutations.
Energies use the Hamiltonian's cached sparse matrix.

Gradients come in two modes:

    parameter-shift     dF/dtheta for each rotation occurrence equals
                        F(theta + pi/4) - F(theta - pi/4); occurrences sharing
                        a parameter are summed. The shift differences are
                        evaluated in one backward sweep, where each equals
                        2 Im <chi_k| g_k |psi_k> with chi_k the Hamiltonian
                        pulled back to rotation k.
    finite-difference   central differences with step fd_step.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse

from src.core.config import GradientMode
from src.core.exceptions import DegenerateSpectrumError, DimensionError, NumericalError
from src.quantum.hamiltonian import PauliSum, SpectralStats
from src.quantum.pauli import PauliString

NORM_TOL = 1e-9
_IMAG_TOL = 1e-9

Operator = Union[PauliSum, np.ndarray, scipy.sparse.spmatrix]


@dataclass(frozen=True)
class StateVector:
    """
    A normalized n-qubit state.

    Attributes:
        n: Qubit count.
        amplitudes: 2^n complex amplitudes; basis index bit j is qubit j.
    """

    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (1 << self.n,):
            raise DimensionError("simulator", f"expected {1 << self.n} amplitudes, got {self.amplitudes.shape}")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise NumericalError("simulator", f"state norm drifted to {norm:.12f}")

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amplitudes = np.zeros(1 << n, dtype=complex)
        amplitudes[0] = 1.0
        return cls(n, amplitudes)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state from a bit string, qubit 0 leftmost."""
        amplitudes = np.zeros(1 << len(bits), dtype=complex)
        amplitudes[basis_index(bits)] = 1.0
        return cls(len(bits), amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_index(bits: str) -> int:
    """Index of the basis state written with qubit 0 leftmost."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return sum(1 << j for j, bit in enumerate(bits) if bit == "1")


# -- Clifford gates on raw amplitude arrays ---------------------------------

def _apply_hadamard(amplitudes: np.ndarray, qubit: int) -> np.ndarray:
    view = amplitudes.reshape(-1, 2, 1 << qubit)
    out = np.empty_like(view)
    out[:, 0, :] = (view[:, 0, :] + view[:, 1, :]) / np.sqrt(2.0)
    out[:, 1, :] = (view[:, 0, :] - view[:, 1, :]) / np.sqrt(2.0)
    return out.reshape(-1)


def _apply_phase(amplitudes: np.ndarray, qubit: int) -> np.ndarray:
    out = amplitudes.copy().reshape(-1, 2, 1 << qubit)
    out[:, 1, :] *= 1j
    return out.reshape(-1)


def _apply_cnot(amplitudes: np.ndarray, control: int, target: int) -> np.ndarray:
    index = np.arange(amplitudes.size, dtype=np.int64)
    return amplitudes[index ^ (((index >> control) & 1) << target)]


def random_clifford_state(n: int, rng: np.random.Generator, depth: Optional[int] = None) -> StateVector:
    """
    A random stabilizer state from a random H/S/CX circuit on |0...0>.

    Args:
        n: Qubit count.
        rng: Caller-owned generator.
        depth: Gate count, default 2 n^2.
    """
    depth = 2 * n * n if depth is None else depth
    amplitudes = StateVector.zero(n).amplitudes
    gate_kinds = 3 if n > 1 else 2
    for _ in range(depth):
        kind = int(rng.integers(gate_kinds))
        if kind == 0:
            amplitudes = _apply_hadamard(amplitudes, int(rng.integers(n)))
        elif kind == 1:
            amplitudes = _apply_phase(amplitudes, int(rng.integers(n)))
        else:
            control, target = (int(q) for q in rng.choice(n, size=2, replace=False))
            amplitudes = _apply_cnot(amplitudes, control, target)
    return StateVector(n, amplitudes)


# -- ansatz programs -----------------------------------------------------------

@dataclass(frozen=True)
class InitialState:
    """
    Initial state of an ansatz.

    Attributes:
        kind: "basis" or "clifford".
        bits: Basis bit string (qubit 0 leftmost) for kind "basis".
        seed: Circuit seed for kind "clifford".
    """

    kind: str = "basis"
    bits: Optional[str] = None
    seed: Optional[int] = None

    def prepare(self, n: int) -> StateVector:
        if self.kind == "clifford":
            return random_clifford_state(n, np.random.default_rng(self.seed))
        bits = self.bits if self.bits is not None else "0" * n
        if len(bits) != n:
            raise DimensionError("simulator", f"initial bits {bits!r} do not match {n} qubits")
        return StateVector.basis(bits)

    def describe(self) -> str:
        if self.kind == "clifford":
            return f"clifford:{self.seed}"
        return f"basis:{self.bits}"


@dataclass(frozen=True)
class Rotation:
    """
    One factor exp(-i * scale * theta[param_index] * generator).

    ``scale`` is 1 for Hamiltonian-agnostic ansatzes; the HVA uses the Pauli
    coefficient of the Hamiltonian term it exponentiates.
    """

    generator: PauliString
    param_index: int
    scale: float = 1.0


@dataclass(frozen=True)
class AnsatzProgram:
    """
    An ordered product of Pauli rotations with shared parameters.

    Attributes:
        n: Qubit count.
        rotations: Rotations in application order.
        p: Distinct parameter count.
        initial_state: State the rotations act on.
    """

    n: int
    rotations: Tuple[Rotation, ...]
    p: int
    initial_state: InitialState = field(default_factory=InitialState)

    def __post_init__(self) -> None:
        used = set()
        for rotation in self.rotations:
            if rotation.generator.n != self.n:
                raise DimensionError("simulator", f"generator {rotation.generator.label} is not on {self.n} qubits")
            if not rotation.generator.is_hermitian:
                raise ValueError(f"generator {rotation.generator.label} is not Hermitian")
            if not 0 <= rotation.param_index < self.p:
                raise ValueError(f"parameter index {rotation.param_index} outside 0..{self.p - 1}")
            used.add(rotation.param_index)
        if len(used) != self.p:
            raise ValueError(f"parameters {sorted(set(range(self.p)) - used)} drive no rotation")

    @property
    def q(self) -> int:
        """Total rotation count."""
        return len(self.rotations)

    @property
    def r(self) -> Optional[int]:
        """Rotations per parameter, when every parameter appears equally often."""
        return self.q // self.p if self.q % self.p == 0 else None

    @property
    def is_periodic(self) -> bool:
        """True when the loss is 2pi-periodic in every parameter (all scales +-1)."""
        return all(abs(abs(rotation.scale) - 1.0) < 1e-12 for rotation in self.rotations)


# -- evaluation ------------------------------------------------------------------

def _rotate(amplitudes: np.ndarray, generator: PauliString, angle: float) -> np.ndarray:
    return np.cos(angle) * amplitudes - 1j * np.sin(angle) * generator.apply(amplitudes)


def apply_pauli_rotation(s: StateVector, g: PauliString, angle: float) -> StateVector:
    """
    exp(-i angle g) applied to s.

    Raises:
        DimensionError: If g and s have different qubit counts.
    """
    if g.n != s.n:
        raise DimensionError("simulator", f"state has {s.n} qubits, generator has {g.n}")
    if not g.is_hermitian:
        raise ValueError(f"generator {g.label} is not Hermitian")
    return StateVector(s.n, _rotate(s.amplitudes, g, angle))


def _check_params(a: AnsatzProgram, params: Sequence[float]) -> np.ndarray:
    values = np.asarray(params, dtype=float)
    if values.shape != (a.p,):
        raise DimensionError("simulator", f"program has {a.p} parameters, got {values.shape}")
    return values


def _prepare_amplitudes(a: AnsatzProgram, values: np.ndarray) -> np.ndarray:
    amplitudes = a.initial_state.prepare(a.n).amplitudes
    for rotation in a.rotations:
        amplitudes = _rotate(amplitudes, rotation.generator, rotation.scale * values[rotation.param_index])
    return amplitudes


def prepare(a: AnsatzProgram, params: Sequence[float]) -> StateVector:
    """
    The ansatz state for a parameter vector.

    Raises:
        DimensionError: If len(params) != a.p.
    """
    return StateVector(a.n, _prepare_amplitudes(a, _check_params(a, params)))


def _operator(h: Operator):
    if isinstance(h, PauliSum):
        return h.sparse_matrix
    return h


def _expectation(amplitudes: np.ndarray, op) -> Tuple[float, np.ndarray]:
    applied = op @ amplitudes
    value = np.vdot(amplitudes, applied)
    if abs(value.imag) > _IMAG_TOL * max(1.0, abs(value.real)):
        raise NumericalError("simulator", f"energy has imaginary part {value.imag:.3e}; operator not Hermitian?")
    return float(value.real), applied


def energy(s: StateVector, h: Operator) -> float:
    """
    <s|H|s> for a PauliSum, dense or sparse Hamiltonian.

    Raises:
        DimensionError: If H and s have different dimensions.
        NumericalError: If the expectation has a non-negligible imaginary part.
    """
    op = _operator(h)
    if op.shape != (s.amplitudes.size, s.amplitudes.size):
        raise DimensionError("simulator", f"operator shape {op.shape} does not match {s.n} qubits")
    return _expectation(s.amplitudes, op)[0]


def _shift_rule_sweep(a: AnsatzProgram, values: np.ndarray, op) -> Tuple[float, np.ndarray]:
    psi = _prepare_amplitudes(a, values)
    value, chi = _expectation(psi, op)
    grad = np.zeros(a.p)
    for rotation in reversed(a.rotations):
        generator = rotation.generator
        grad[rotation.param_index] += 2.0 * rotation.scale * np.imag(np.vdot(chi, generator.apply(psi)))
        angle = rotation.scale * values[rotation.param_index]
        psi = _rotate(psi, generator, -angle)
        chi = _rotate(chi, generator, -angle)
    return value, grad


def _finite_difference(a: AnsatzProgram, values: np.ndarray, op, step: float) -> Tuple[float, np.ndarray]:
    value = _expectation(_prepare_amplitudes(a, values), op)[0]
    grad = np.zeros(a.p)
    for i in range(a.p):
        shifted = values.copy()
        shifted[i] += step
        forward = _expectation(_prepare_amplitudes(a, shifted), op)[0]
        shifted[i] -= 2.0 * step
        backward = _expectation(_prepare_amplitudes(a, shifted), op)[0]
        grad[i] = (forward - backward) / (2.0 * step)
    return value, grad


def energy_and_gradient(
    a: AnsatzProgram,
    params: Sequence[float],
    h: Operator,
    mode: GradientMode = GradientMode.PARAMETER_SHIFT,
    fd_step: float = 1e-4,
) -> Tuple[float, np.ndarray]:
    """
    Raw energy and its gradient at ``params``.

    Args:
        a: Ansatz program.
        params: Parameter vector of length a.p.
        h: Hamiltonian.
        mode: Gradient mode.
        fd_step: Central-difference step (finite-difference mode only).

    Returns:
        (energy, gradient).
    """
    values = _check_params(a, params)
    op = _operator(h)
    if GradientMode(mode) == GradientMode.FINITE_DIFFERENCE:
        return _finite_difference(a, values, op, fd_step)
    return _shift_rule_sweep(a, values, op)


def gradient(
    a: AnsatzProgram,
    params: Sequence[float],
    h: Operator,
    mode: GradientMode = GradientMode.PARAMETER_SHIFT,
    fd_step: float = 1e-4,
) -> np.ndarray:
    """Gradient of <theta|H|theta> with respect to the p parameters."""
    return energy_and_gradient(a, params, h, mode, fd_step)[1]


def normalized_energy(e_raw: float, stats: SpectralStats) -> float:
    """
    (E - lambda_min) / (lambda_mean - lambda_min).

    Raises:
        DegenerateSpectrumError: If c_vqa is not positive.
    """
    if stats.c_vqa <= 0.0:
        raise DegenerateSpectrumError("simulator", "c_vqa must be positive to normalize energies")
    return (e_raw - stats.lambda_min) / stats.c_vqa
