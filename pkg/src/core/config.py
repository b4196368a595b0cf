# -*- coding: utf-8 -*-
"""
Configuration management for the VQA landscape laboratory.

This module provides centralized configuration using Pydantic models with
YAML file support. Runtime settings can be overridden via environment
variables; per-run configs (experiment, predict, crt, spectrum) are YAML
files whose keys mirror the models defined here.

Configuration Files:
    - config/settings.yaml: runtime, logging and training defaults
    - config/experiments/*.yaml: one file per reproduction pipeline

Environment Variables:
    - WHRF_CONFIG_PATH: Path to settings.yaml (default: config/settings.yaml)
    - WHRF_OUTPUT_DIR: Output directory for run artifacts (default: runs)
    - WHRF_THREADS: Worker cap for parallel instances and trials (default: 1)
    - WHRF_LOG_LEVEL: Logging level (default: INFO)

Example:
    >>> from src.core.config import get_settings
    >>> settings = get_settings()
    >>> print(settings.runtime.threads)
    1
"""

import os
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.exceptions import ConfigurationError


# Defaults reported for the spinless Fermi-Hubbard experiments
DEFAULT_HOPPING = 1.0
DEFAULT_INTERACTION = 2.0
DEFAULT_DISORDER_VARIANCE = 1e-2
DEFAULT_INSTANCES = 52

ModelT = TypeVar("ModelT", bound=BaseModel)


class GradientMode(str, Enum):
    """Gradient evaluation strategies supported by the simulator."""

    PARAMETER_SHIFT = "parameter-shift"
    FINITE_DIFFERENCE = "finite-difference"


class AnsatzFamily(str, Enum):
    """Ansatz families the experiment harness can build."""

    RANDOM = "random"
    HVA = "hva"


class InitialStateKind(str, Enum):
    """Initial states available to the random-Pauli ansatz."""

    ZERO = "zero"
    CLIFFORD = "clifford"


class Ensemble(str, Enum):
    """Random-matrix ensembles exposed by the spectrum command."""

    GOE = "goe"
    WISHART = "wishart"
    C = "c"


class FermiHubbardSpec(BaseModel):
    """
    Disordered spinless Fermi-Hubbard chain with open boundaries.

    Attributes:
        n: Site (qubit) count, even and at least 2.
        t_mean: Mean hopping energy T.
        u_mean: Mean nearest-neighbour interaction U.
        disorder_variance: Variance of the per-link normal draws of T_i and U_i.
        seed: Seed for the disorder draw.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(default=6, ge=2, description="Number of sites / qubits")
    t_mean: float = Field(default=DEFAULT_HOPPING, description="Mean hopping energy")
    u_mean: float = Field(default=DEFAULT_INTERACTION, description="Mean interaction energy")
    disorder_variance: float = Field(
        default=DEFAULT_DISORDER_VARIANCE,
        ge=0.0,
        description="Variance of per-link disorder"
    )
    seed: int = Field(default=0, ge=0, description="Disorder RNG seed")

    @field_validator("n")
    @classmethod
    def _n_even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("n must be even")
        return value


class TrainingConfig(BaseModel):
    """
    Gradient descent with momentum.

    Attributes:
        learning_rate: Step size.
        momentum: Momentum coefficient in [0, 1).
        tol: Halting threshold on the per-iteration change of the loss.
        grad_tol: Gradient norm the run must also reach before a tol halt.
        max_iters: Iteration cap.
        gradient_mode: Parameter-shift (exact) or central finite differences.
        fd_step: Finite-difference step in radians.
        patience: Consecutive stalled iterations required before halting.
        record_every: Trajectory decimation stride.
        seed: Seed for the initial parameter draw when none is supplied.
    """

    model_config = ConfigDict(extra="forbid")

    learning_rate: float = Field(default=0.05, gt=0.0, description="Learning rate")
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0, description="Momentum coefficient")
    tol: float = Field(default=1e-5, gt=0.0, description="Minimum improvement per iteration")
    grad_tol: float = Field(default=1e-3, gt=0.0, description="Gradient norm required for a tol halt")
    max_iters: int = Field(default=1_000_000, ge=1, description="Iteration cap")
    gradient_mode: GradientMode = Field(default=GradientMode.PARAMETER_SHIFT)
    fd_step: float = Field(default=1e-4, gt=0.0, description="Finite-difference step")
    patience: int = Field(default=1, ge=1, description="Stalled iterations before halting")
    record_every: int = Field(default=100, ge=1, description="Trajectory decimation stride")
    seed: int = Field(default=0, ge=0, description="Seed for random initial parameters")


class ExperimentConfig(BaseModel):
    """
    A batch of independent VQE training instances on one Hamiltonian.

    Attributes:
        hamiltonian: The disordered Hamiltonian shared by every instance.
        family: Ansatz family.
        p: Distinct parameter count (random family).
        r: Rotations per parameter (random family).
        layers: HVA layer count.
        f: HVA parameter-split factor.
        initial_state: Initial state of the random family.
        paired_control: Also train random-ansatz instances at the HVA's gamma (hva family).
        instances: Number of training instances.
        master_seed: Seed every instance stream is derived from.
        training: Optimizer settings.
        output_dir: Where run artifacts go; falls back to settings.
    """

    model_config = ConfigDict(extra="forbid")

    hamiltonian: FermiHubbardSpec = Field(default_factory=FermiHubbardSpec)
    family: AnsatzFamily = Field(default=AnsatzFamily.RANDOM)
    p: Optional[int] = Field(default=None, ge=1, description="Parameter count (random family)")
    r: int = Field(default=1, ge=1, description="Rotations per parameter")
    layers: Optional[int] = Field(default=None, ge=1, description="HVA layer count")
    f: int = Field(default=1, ge=1, description="HVA parameter-split factor")
    initial_state: InitialStateKind = Field(default=InitialStateKind.ZERO)
    paired_control: bool = Field(default=False, description="Train a gamma-matched random-ansatz control")
    instances: int = Field(default=DEFAULT_INSTANCES, ge=1, description="Training instances")
    master_seed: int = Field(default=0, ge=0, description="Master seed")
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    output_dir: Optional[str] = Field(default=None, description="Output directory")

    @model_validator(mode="after")
    def _family_fields(self) -> "ExperimentConfig":
        if self.family == AnsatzFamily.RANDOM:
            if self.p is None:
                raise ValueError("the random family needs p")
            if self.layers is not None or self.f != 1:
                raise ValueError("layers and f only apply to the hva family")
            if self.paired_control:
                raise ValueError("paired_control only applies to the hva family")
        else:
            if self.layers is None:
                raise ValueError("the hva family needs layers")
            if self.p is not None or self.r != 1:
                raise ValueError("p and r are derived for the hva family")
            if self.initial_state != InitialStateKind.ZERO:
                raise ValueError("the hva family starts from its half-filled basis state")
        return self

    @property
    def parameter_count(self) -> int:
        """Distinct parameter count p of the configured ansatz."""
        if self.family == AnsatzFamily.HVA:
            return 3 * self.layers * self.f
        return self.p


class PredictConfig(BaseModel):
    """
    Theory predictions for a given overparameterization factor.

    Either ``gamma`` is given directly, or ``hamiltonian`` plus ``p`` and gamma
    is computed from the spectrum's degrees of freedom.
    """

    model_config = ConfigDict(extra="forbid")

    gamma: Optional[float] = Field(default=None, gt=0.0)
    r: int = Field(default=1, ge=1)
    q: Optional[int] = Field(default=None, ge=1, description="Total rotation count (default p*r)")
    hamiltonian: Optional[FermiHubbardSpec] = None
    p: Optional[int] = Field(default=None, ge=1)
    sector: Optional[int] = Field(default=None, ge=0, description="Fermion-number sector for m")
    energies: int = Field(default=50, ge=2, description="Points of the asymptotic curve")

    @model_validator(mode="after")
    def _gamma_source(self) -> "PredictConfig":
        if self.gamma is None and (self.hamiltonian is None or self.p is None):
            raise ValueError("give gamma, or a hamiltonian together with p")
        if self.gamma is None and self.q is None:
            self.q = self.p * self.r
        if self.q is None:
            raise ValueError("q is required when gamma is given directly")
        return self


class CrtConfig(BaseModel):
    """Monte Carlo critical-point profile over an energy grid."""

    model_config = ConfigDict(extra="forbid")

    k: int = Field(default=0, ge=0, description="Hessian index")
    p: int = Field(default=16, ge=1)
    m: float = Field(default=80.0, ge=1.0)
    r: int = Field(default=1, ge=1)
    e_min: float = Field(default=0.02, gt=0.0, lt=1.0)
    e_max: float = Field(default=0.98, gt=0.0, lt=1.0)
    points: int = Field(default=25, ge=1)
    trials: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _grid(self) -> "CrtConfig":
        if self.e_min >= self.e_max:
            raise ValueError("e_min must be below e_max")
        if self.k >= self.p:
            raise ValueError("k must be below p")
        return self


class SpectrumConfig(BaseModel):
    """Eigenvalue sampling from one of the random-matrix ensembles."""

    model_config = ConfigDict(extra="forbid")

    ensemble: Ensemble = Field(default=Ensemble.C)
    p: int = Field(default=128, ge=1)
    m: float = Field(default=256.0, ge=1.0)
    r: int = Field(default=1, ge=1)
    x: float = Field(default=0.0, ge=0.0)
    draws: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0)


class RuntimeConfig(BaseModel):
    """
    Runtime settings.

    Attributes:
        output_dir: Root directory for run artifacts.
        threads: Worker cap for parallel instances and trials.
    """

    output_dir: str = Field(default="runs", description="Artifact directory")
    threads: int = Field(default=1, ge=1, description="Worker cap")


class LoggingConfig(BaseModel):
    """Logging settings."""

    level: str = Field(default="INFO", description="Logging level name")


class Settings(BaseModel):
    """
    Application settings container.

    Attributes:
        runtime: Output directory and worker cap.
        logging: Logging level.
        training: Training defaults used when a run config omits them.
    """

    model_config = ConfigDict(extra="ignore")

    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)


def get_config_path() -> str:
    """Get the settings file path."""
    return os.getenv("WHRF_CONFIG_PATH", "config/settings.yaml")


def load_yaml_config(config_path: str) -> Dict[str, Any]:
    """
    Load configuration from a YAML file.

    Args:
        config_path: Path to the YAML configuration file.

    Returns:
        Dictionary containing the parsed YAML configuration.
        Returns empty dict if file doesn't exist.

    Raises:
        yaml.YAMLError: If the YAML file is malformed.
    """
    path = Path(config_path)
    if not path.exists():
        return {}

    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def save_yaml_config(config: Dict[str, Any], config_path: str) -> None:
    """
    Save configuration to a YAML file.

    Args:
        config: Configuration dictionary to save.
        config_path: Path to the YAML configuration file.
    """
    path = Path(config_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", encoding="utf-8") as f:
        yaml.dump(config, f, default_flow_style=False, allow_unicode=True, sort_keys=False)


def load_run_config(config_path: str, model_cls: Type[ModelT]) -> ModelT:
    """
    Load and validate a per-run YAML config.

    Args:
        config_path: Path to the YAML file.
        model_cls: Pydantic model the file must satisfy.

    Returns:
        The validated config.

    Raises:
        ConfigurationError: If the file is missing, malformed or invalid.
    """
    if not Path(config_path).exists():
        raise ConfigurationError(config_path, "config file not found")
    try:
        raw = load_yaml_config(config_path)
    except yaml.YAMLError as e:
        raise ConfigurationError(config_path, f"malformed YAML: {e}") from e
    return validate_run_config(raw, model_cls)


def validate_run_config(raw: Dict[str, Any], model_cls: Type[ModelT]) -> ModelT:
    """
    Validate a raw config mapping, converting pydantic errors to ConfigurationError.

    Args:
        raw: Parsed config mapping.
        model_cls: Pydantic model to validate against.

    Returns:
        The validated config.

    Raises:
        ConfigurationError: On the first validation failure.
    """
    if not isinstance(raw, dict):
        raise ConfigurationError(model_cls.__name__, "config must be a mapping")
    try:
        return model_cls(**raw)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or model_cls.__name__
        raise ConfigurationError(key, first["msg"]) from e


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings (cached).

    This function loads settings from the YAML configuration file, applies
    environment overrides and caches the result. The cache can be cleared
    by calling `reload_settings()`.

    Returns:
        Settings object containing all application configuration.
    """
    config_path = get_config_path()
    yaml_config = load_yaml_config(config_path)

    # Override with environment variables
    if os.getenv("WHRF_OUTPUT_DIR"):
        yaml_config.setdefault("runtime", {})
        yaml_config["runtime"]["output_dir"] = os.getenv("WHRF_OUTPUT_DIR")

    if os.getenv("WHRF_THREADS"):
        yaml_config.setdefault("runtime", {})
        yaml_config["runtime"]["threads"] = int(os.getenv("WHRF_THREADS"))

    if os.getenv("WHRF_LOG_LEVEL"):
        yaml_config.setdefault("logging", {})
        yaml_config["logging"]["level"] = os.getenv("WHRF_LOG_LEVEL")

    return Settings(**yaml_config)


def reload_settings() -> Settings:
    """
    Reload settings from configuration file.

    Returns:
        Fresh Settings object with updated configuration.
    """
    get_settings.cache_clear()
    return get_settings()
