# -*- coding: utf-8 -*-
"""
Pydantic report and manifest schemas.

These models define what the commands print as JSON and what a run
manifest records on disk.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class HamiltonianReport(BaseModel):
    """
    Output of the hamiltonian command.

    Attributes:
        n: Qubit count.
        sector: Fermion-number sector the statistics refer to (None for the full space).
        stats: Spectral statistics (lambda_min, m, c_vqa, ...).
        diagnostics: Term count, alpha norm, frustration and convergence proxy.
        p: Parameter count gamma was evaluated for.
        gamma: p / (2m), when p is given.
        validation: Loss-histogram and MGF check results, when requested.
    """

    n: int = Field(..., description="Qubit count")
    sector: Optional[int] = Field(default=None, description="Fermion-number sector")
    stats: Dict[str, float] = Field(..., description="Spectral statistics")
    diagnostics: Dict[str, float] = Field(..., description="Mapping diagnostics")
    p: Optional[int] = Field(default=None, description="Parameter count")
    gamma: Optional[float] = Field(default=None, description="Overparameterization factor")
    validation: Optional[Dict[str, Any]] = Field(default=None, description="Theorem checks")

    class Config:
        """Pydantic configuration."""

        json_schema_extra = {
            "example": {
                "n": 6,
                "sector": None,
                "stats": {"lambda_min": -4.1, "m": 21.3, "c_vqa": 4.6},
                "diagnostics": {"A": 21, "frustration": 2.3},
                "p": 20,
                "gamma": 0.47,
            }
        }


class PredictionReport(BaseModel):
    """
    Output of the predict command.

    Attributes:
        gamma: Overparameterization factor.
        overparameterized: True when gamma >= 1.
        message: Human-readable summary.
        band_lo: Lower end of the 1/2 - gamma +- sqrt(gamma) band.
        band_hi: Upper end of that band.
        band_edge_E0: Largest energy with local minima, from the free-probability solver.
        cch_mode: Mode of the small-gamma local-minima density.
        curve_path: CSV of the asymptotic log density, when written.
    """

    gamma: float
    overparameterized: bool
    message: str
    band_lo: Optional[float] = None
    band_hi: Optional[float] = None
    band_edge_E0: Optional[float] = None
    cch_mode: Optional[float] = None
    curve_path: Optional[str] = None


class RunManifest(BaseModel):
    """
    Everything needed to rerun a command.

    Attributes:
        command: Subcommand name.
        config: Full validated config snapshot.
        master_seed: Seed the run derived its streams from; None for deterministic commands.
        threads: Worker cap used.
        artifacts: Paths of every file the run wrote.
        options: Command flags outside the config (e.g. the train instance).
        version: Package version.
        wall_clock_seconds: Run duration.
        created_at: ISO timestamp.
    """

    command: str = Field(..., description="Subcommand")
    config: Dict[str, Any] = Field(..., description="Validated config snapshot")
    master_seed: Optional[int] = Field(default=None, description="Master seed")
    threads: int = Field(default=1, description="Worker cap")
    artifacts: List[str] = Field(default_factory=list, description="Written files")
    options: Dict[str, Any] = Field(default_factory=dict, description="Command flags")
    version: str = Field(..., description="Package version")
    wall_clock_seconds: float = Field(default=0.0, description="Run duration")
    created_at: str = Field(..., description="ISO timestamp")
