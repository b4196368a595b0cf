# -*- coding: utf-8 -*-
"""
Ansatz builders.

Two families:

    random  q = p * r rotations about i.i.d. uniform non-identity Pauli strings;
            parameter i drives rotations i, p + i, ..., (r - 1) p + i.
    hva     Hamiltonian variational ansatz for the Fermi-Hubbard chain. Each
            layer applies exp(-i theta H_coulomb), then the even-link hopping,
            then the odd-link hopping. Each group is split round-robin into f
            sub-sums with their own parameter, so p = 3 * layers * f.
"""

from typing import Optional

import numpy as np

from src.core.config import AnsatzFamily, ExperimentConfig, FermiHubbardSpec, InitialStateKind
from src.core.exceptions import ConfigurationError
from src.core.interfaces import AnsatzBuilder, register_ansatz_family
from src.quantum.hamiltonian import fermi_hubbard_groups
from src.quantum.pauli import sample_uniform_pauli
from src.quantum.simulator import AnsatzProgram, InitialState, Rotation

HVA_GROUP_ORDER = ("coulomb", "even", "odd")


def build_random_ansatz(
    n: int,
    p: int,
    r: int,
    seed: int,
    initial_state: Optional[InitialState] = None,
) -> AnsatzProgram:
    """
    Random-Pauli ansatz with interleaved shared parameters.

    Args:
        n: Qubit count.
        p: Distinct parameter count.
        r: Rotations per parameter.
        seed: Generator-draw seed.
        initial_state: Defaults to |0...0>.

    Returns:
        An AnsatzProgram with q = p * r rotations.
    """
    if p < 1 or r < 1:
        raise ConfigurationError("ansatz.p/r", f"p and r must be positive, got p={p}, r={r}")
    rng = np.random.default_rng(seed)
    rotations = tuple(
        Rotation(sample_uniform_pauli(n, True, rng), k % p)
        for k in range(p * r)
    )
    if initial_state is None:
        initial_state = InitialState("basis", bits="0" * n)
    return AnsatzProgram(n, rotations, p, initial_state)


def build_hva_ansatz(spec: FermiHubbardSpec, layers: int, f: int) -> AnsatzProgram:
    """
    Hamiltonian variational ansatz with parameter-split factor f.

    Within a group all Pauli terms commute, so each group exponential is
    exactly the product of its terms' rotations, each scaled by the term's
    coefficient.

    Args:
        spec: The Hamiltonian whose terms the layers exponentiate.
        layers: Layer count.
        f: Sub-sums per group.

    Returns:
        An AnsatzProgram starting from |1> on the first n/2 qubits.

    Raises:
        ConfigurationError: If layers or f are not positive, or f exceeds a group's term count.
    """
    if layers < 1 or f < 1:
        raise ConfigurationError("ansatz.layers/f", f"layers and f must be positive, got {layers}, {f}")
    n = spec.n
    groups = fermi_hubbard_groups(spec)
    group_terms = {name: groups[name].non_identity_terms for name in HVA_GROUP_ORDER}
    smallest = min(len(terms) for terms in group_terms.values())
    if f > smallest:
        raise ConfigurationError("ansatz.f", f"f={f} exceeds the smallest group size {smallest}")

    rotations = []
    for layer in range(layers):
        for g, name in enumerate(HVA_GROUP_ORDER):
            base = (layer * len(HVA_GROUP_ORDER) + g) * f
            for t, (coefficient, op) in enumerate(group_terms[name]):
                rotations.append(Rotation(op, base + t % f, coefficient))

    bits = "1" * (n // 2) + "0" * (n - n // 2)
    return AnsatzProgram(n, tuple(rotations), 3 * layers * f, InitialState("basis", bits=bits))


class RandomAnsatzBuilder(AnsatzBuilder):
    """Fresh random-Pauli ansatz per instance."""

    def __init__(self, n: int, p: int, r: int = 1, initial_state: InitialStateKind = InitialStateKind.ZERO) -> None:
        self.n = n
        self.p = p
        self.r = r
        self.initial_state = InitialStateKind(initial_state)

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "RandomAnsatzBuilder":
        return cls(config.hamiltonian.n, config.p, config.r, config.initial_state)

    def build(self, seed: int) -> AnsatzProgram:
        if self.initial_state == InitialStateKind.CLIFFORD:
            initial = InitialState("clifford", seed=seed)
        else:
            initial = InitialState("basis", bits="0" * self.n)
        return build_random_ansatz(self.n, self.p, self.r, seed, initial)


class HvaAnsatzBuilder(AnsatzBuilder):
    """The HVA is fixed by the Hamiltonian; only starting points vary."""

    redraws_per_instance = False

    def __init__(self, spec: FermiHubbardSpec, layers: int, f: int = 1) -> None:
        self.spec = spec
        self.layers = layers
        self.f = f
        self._program: Optional[AnsatzProgram] = None

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "HvaAnsatzBuilder":
        return cls(config.hamiltonian, config.layers, config.f)

    def build(self, seed: int) -> AnsatzProgram:
        if self._program is None:
            self._program = build_hva_ansatz(self.spec, self.layers, self.f)
        return self._program


register_ansatz_family(AnsatzFamily.RANDOM.value, RandomAnsatzBuilder)
register_ansatz_family(AnsatzFamily.HVA.value, HvaAnsatzBuilder)
