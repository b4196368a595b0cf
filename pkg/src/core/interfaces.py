# -*- coding: utf-8 -*-
"""
Base interfaces for ansatz families.

Every ansatz family the experiment harness can train implements
``AnsatzBuilder`` and is registered under its family name.

Interfaces:
    - AnsatzBuilder: builds one AnsatzProgram per training instance

Example:
    >>> from src.core.interfaces import AnsatzBuilder, register_ansatz_family
    >>> class MyAnsatz(AnsatzBuilder):
    ...     @classmethod
    ...     def from_config(cls, config):
    ...         return cls()
    ...     def build(self, seed):
    ...         return ...
    >>> register_ansatz_family("mine", MyAnsatz)
"""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Dict, Type

if TYPE_CHECKING:
    from src.core.config import ExperimentConfig
    from src.quantum.simulator import AnsatzProgram


class AnsatzBuilder(ABC):
    """
    Abstract base class for ansatz families.

    A builder is created once per experiment and asked for one program per
    training instance. Hamiltonian-agnostic families redraw their generators
    from the instance seed; Hamiltonian-informed families may ignore it.
    """

    #: Whether ``build`` depends on the seed it receives.
    redraws_per_instance: bool = True

    @classmethod
    @abstractmethod
    def from_config(cls, config: "ExperimentConfig") -> "AnsatzBuilder":
        """
        Create the builder for an experiment.

        Args:
            config: The validated experiment config.

        Returns:
            A builder instance.
        """
        pass

    @abstractmethod
    def build(self, seed: int) -> "AnsatzProgram":
        """
        Build the program for one training instance.

        Args:
            seed: Instance-specific seed.

        Returns:
            The AnsatzProgram.
        """
        pass


ANSATZ_FAMILIES: Dict[str, Type[AnsatzBuilder]] = {}


def register_ansatz_family(name: str, cls: Type) -> None:
    """
    Validate and register an ansatz family.

    Args:
        name: Family name as used in experiment configs.
        cls: The builder class.

    Raises:
        TypeError: If the class does not implement AnsatzBuilder.
        ValueError: If another class already owns the name.
    """
    if not (isinstance(cls, type) and issubclass(cls, AnsatzBuilder)):
        raise TypeError(f"Class {getattr(cls, '__name__', cls)} must implement {AnsatzBuilder.__name__}.")
    existing = ANSATZ_FAMILIES.get(name)
    if existing is not None and existing is not cls:
        raise ValueError(f"Ansatz family {name!r} is already registered to {existing.__name__}.")
    ANSATZ_FAMILIES[name] = cls
