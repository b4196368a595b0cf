# -*- coding: utf-8 -*-
"""
Pauli-string algebra in X/Z bit-mask form.

A PauliString on n qubits is stored as two integer masks and a phase
exponent k, representing i^k * P_0 (x) P_1 (x) ... where the letter on
qubit j is I, X, Z or Y according to bits j of (x_mask, z_mask). Y is a
letter in its own right (Hermitian), so "+Y" has phase exponent 0.

Qubit j is bit j of the masks and also bit j of computational-basis
indices; text rendering puts qubit 0 leftmost, e.g. "+XIZY".

Python integers are unbounded, so masks are not limited to 64 qubits.

Example:
    >>> from src.quantum.pauli import PauliString, multiply
    >>> multiply(PauliString.from_label("X"), PauliString.from_label("Z")).label
    '-iY'
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.core.exceptions import DimensionError

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {prefix: k for k, prefix in _PHASE_PREFIX.items()}
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_LETTER_BITS = {letter: bits for bits, letter in _LETTERS.items()}

# Rejection-free fast path for sample_uniform_pauli while 4^n fits an int64 draw.
_FAST_SAMPLING_MAX_QUBITS = 31


def _popcount(value: int) -> int:
    return int(value).bit_count()


@dataclass(frozen=True)
class PauliString:
    """
    An n-qubit Pauli operator i^phase * (letters).

    Attributes:
        n: Qubit count.
        x_mask: Bit j set when qubit j carries X or Y.
        z_mask: Bit j set when qubit j carries Z or Y.
        phase: Exponent k of the global factor i^k, in {0, 1, 2, 3}.
    """

    n: int
    x_mask: int
    z_mask: int
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError("pauli", f"qubit count must be positive, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise DimensionError("pauli", f"mask bits beyond qubit {self.n - 1}")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        """The n-qubit identity with phase +1."""
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """
        Parse a label such as "XIZY", "+XX", "-iZ".

        Args:
            label: Optional phase prefix (+, -, +i, -i, i) followed by letters.

        Returns:
            The parsed PauliString.
        """
        phase = 0
        body = label
        for prefix in ("+i", "-i", "i", "+", "-"):
            if label.startswith(prefix):
                phase = _PREFIX_PHASE.get(prefix, 1)
                body = label[len(prefix):]
                break
        if not body:
            raise ValueError(f"empty Pauli label: {label!r}")
        x_mask = z_mask = 0
        for j, letter in enumerate(body.upper()):
            if letter not in _LETTER_BITS:
                raise ValueError(f"unknown Pauli letter {letter!r} in {label!r}")
            x_bit, z_bit = _LETTER_BITS[letter]
            x_mask |= x_bit << j
            z_mask |= z_bit << j
        return cls(len(body), x_mask, z_mask, phase)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """A single-qubit letter on ``qubit``, identity elsewhere."""
        x_bit, z_bit = _LETTER_BITS[letter.upper()]
        return cls(n, x_bit << qubit, z_bit << qubit, 0)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.phase == 0

    @property
    def is_hermitian(self) -> bool:
        """Hermitian iff the global phase is real."""
        return self.phase % 2 == 0

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return _popcount(self.x_mask | self.z_mask)

    @property
    def letters(self) -> str:
        return "".join(
            _LETTERS[((self.x_mask >> j) & 1, (self.z_mask >> j) & 1)] for j in range(self.n)
        )

    @property
    def label(self) -> str:
        return f"{_PHASE_PREFIX[self.phase]}{self.letters}"

    @property
    def unsigned(self) -> "PauliString":
        """The same letters with phase +1."""
        return PauliString(self.n, self.x_mask, self.z_mask, 0)

    def __str__(self) -> str:
        return self.label

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """
        Apply this operator to a statevector (or a stack of column vectors).

        Uses the index permutation b -> b ^ x_mask and the sign (-1)^popcount(b & z_mask);
        no dense matrix is formed.

        Args:
            amplitudes: Array whose first axis has length 2^n.

        Returns:
            A new array holding P @ amplitudes.
        """
        dim = 1 << self.n
        if amplitudes.shape[0] != dim:
            raise DimensionError(
                "pauli", f"operator acts on {self.n} qubits, vector has length {amplitudes.shape[0]}"
            )
        coeff = 1j ** ((self.phase + _popcount(self.x_mask & self.z_mask)) % 4)
        signs = z_signs(self.n, self.z_mask)
        if amplitudes.ndim > 1:
            signs = signs.reshape((dim,) + (1,) * (amplitudes.ndim - 1))
        flipped = (signs * amplitudes)[flip_permutation(self.n, self.x_mask)]
        return coeff * flipped

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (small n only, used by oracles)."""
        return self.apply(np.eye(1 << self.n, dtype=complex))


@lru_cache(maxsize=4096)
def z_signs(n: int, z_mask: int) -> np.ndarray:
    """(-1)^popcount(b & z_mask) for every basis index b, as a read-only array."""
    index = np.arange(1 << n, dtype=np.int64)
    signs = np.ones(1 << n)
    for j in range(n):
        if (z_mask >> j) & 1:
            signs *= 1 - 2 * ((index >> j) & 1)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=4096)
def flip_permutation(n: int, x_mask: int) -> np.ndarray:
    """The index permutation b -> b ^ x_mask, as a read-only array."""
    permutation = np.arange(1 << n, dtype=np.int64) ^ x_mask
    permutation.setflags(write=False)
    return permutation


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError("pauli", f"size mismatch: {a.n} vs {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """
    Group product a * b with exact phase tracking.

    Each letter is i^(x z) X^x Z^z. Moving Z^z1 past X^x2 costs (-1)^(z1 x2), so
    the exponent of i picks up x1.z1 + x2.z2 + 2 z1.x2 - x3.z3, summed over qubits.

    Raises:
        DimensionError: If the qubit counts differ.
    """
    _check_sizes(a, b)
    x3 = a.x_mask ^ b.x_mask
    z3 = a.z_mask ^ b.z_mask
    phase = (
        a.phase
        + b.phase
        + _popcount(a.x_mask & a.z_mask)
        + _popcount(b.x_mask & b.z_mask)
        + 2 * _popcount(a.z_mask & b.x_mask)
        - _popcount(x3 & z3)
    )
    return PauliString(a.n, x3, z3, phase % 4)


def commutes(a: PauliString, b: PauliString) -> bool:
    """
    True iff the symplectic product a.x . b.z + a.z . b.x is even.

    Raises:
        DimensionError: If the qubit counts differ.
    """
    _check_sizes(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) % 2 == 0


def sample_uniform_pauli(n: int, exclude_identity: bool, rng: np.random.Generator) -> PauliString:
    """
    Draw a Pauli string uniformly over the 4^n mask pairs, phase +1.

    Args:
        n: Qubit count.
        exclude_identity: Draw from the 4^n - 1 non-identity strings instead.
        rng: Caller-owned generator.

    Returns:
        The sampled PauliString.
    """
    if n < 1:
        raise DimensionError("pauli", f"qubit count must be positive, got {n}")
    low = 1 if exclude_identity else 0
    if n <= _FAST_SAMPLING_MAX_QUBITS:
        code = int(rng.integers(low, 1 << (2 * n)))
        return PauliString(n, code & ((1 << n) - 1), code >> n, 0)

    while True:
        bits = rng.integers(0, 2, size=2 * n)
        x_mask = int(sum(int(bit) << j for j, bit in enumerate(bits[:n])))
        z_mask = int(sum(int(bit) << j for j, bit in enumerate(bits[n:])))
        if not (exclude_identity and x_mask == 0 and z_mask == 0):
            return PauliString(n, x_mask, z_mask, 0)
