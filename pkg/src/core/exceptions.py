# -*- coding: utf-8 -*-
"""
Custom exception classes for the VQA landscape laboratory.

This module defines a hierarchy of custom exceptions so that the CLI can
map failures onto exit codes (user error vs numerical failure) and tests
can catch precise failure modes.

Exception Hierarchy:
    - LandscapeError (base)
        - ConfigurationError
        - DimensionError
        - NumericalError
            - DegenerateSpectrumError
            - SymmetryError
            - NormalizationError
            - BracketingError
            - TrainingAbortedError

Example:
    >>> from src.core.exceptions import DimensionError
    >>> raise DimensionError("hamiltonian", "dense path limited to n <= 12")
"""

from typing import Optional, Sequence


class LandscapeError(Exception):
    """
    Base exception for every domain error raised by this package.

    Attributes:
        component: Name of the component that raised the error.
        message: Human-readable error message.
    """

    def __init__(self, component: str, message: str) -> None:
        """
        Initialize LandscapeError.

        Args:
            component: The component that raised the error (e.g. "pauli").
            message: A descriptive error message.
        """
        self.component = component
        self.message = message
        super().__init__(f"[{component}] {message}")


class ConfigurationError(LandscapeError):
    """
    Exception raised for configuration-related errors.

    This includes missing run configs, invalid values, or family-specific
    fields that do not fit together.

    Attributes:
        config_key: The configuration key that caused the error.
        message: Human-readable error message.

    Example:
        >>> raise ConfigurationError("experiment.f", "f is only valid for the hva family")
    """

    def __init__(self, config_key: str, message: str) -> None:
        """
        Initialize ConfigurationError.

        Args:
            config_key: The configuration key that caused the error.
            message: A descriptive error message.
        """
        self.config_key = config_key
        self.message = message
        self.component = "config"
        Exception.__init__(self, f"Configuration error [{config_key}]: {message}")


class DimensionError(LandscapeError):
    """
    Exception raised when operand sizes do not match or exceed the dense path.

    Example:
        >>> raise DimensionError("simulator", "state has 3 qubits, generator has 4")
    """

    pass


class NumericalError(LandscapeError):
    """
    Base exception for numerical failures.

    The CLI reports these with exit code 2.
    """

    pass


class DegenerateSpectrumError(NumericalError):
    """
    Exception raised when a spectrum is constant.

    The degrees-of-freedom parameter m and the normalization c_VQA are
    undefined for a constant spectrum.
    """

    pass


class SymmetryError(NumericalError):
    """Exception raised when an operator fails to conserve fermion number."""

    pass


class NormalizationError(NumericalError):
    """Exception raised when a state norm or a measure's mass drifts."""

    pass


class BracketingError(NumericalError):
    """Exception raised when no sign change can be bracketed for a root search."""

    pass


class TrainingAbortedError(NumericalError):
    """
    Exception raised when training produces a non-finite loss or gradient.

    Attributes:
        iteration: Iteration at which the non-finite value appeared.
        params: Parameter vector at that iteration, if available.
    """

    def __init__(
        self,
        message: str,
        iteration: int,
        params: Optional[Sequence[float]] = None
    ) -> None:
        """
        Initialize TrainingAbortedError.

        Args:
            message: A descriptive error message.
            iteration: Iteration at which training aborted.
            params: Parameter vector at the failing iteration.
        """
        self.iteration = iteration
        self.params = None if params is None else list(params)
        super().__init__("trainer", f"{message} (iteration {iteration})")
