# -*- coding: utf-8 -*-
"""Pauli algebra, Fermi-Hubbard Hamiltonians and statevector simulation."""

from src.quantum.pauli import PauliString
from src.quantum.hamiltonian import PauliSum, SpectralStats, build_fermi_hubbard
from src.quantum.simulator import AnsatzProgram, StateVector

__all__ = ["PauliString", "PauliSum", "SpectralStats", "build_fermi_hubbard", "AnsatzProgram", "StateVector"]
