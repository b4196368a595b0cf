# -*- coding: utf-8 -*-
"""
Core module for the VQA landscape laboratory.

This module contains the ansatz-builder interface, configuration management,
logging and custom exception classes.
"""

from src.core.interfaces import AnsatzBuilder, register_ansatz_family
from src.core.config import Settings, get_settings
from src.core.exceptions import (
    LandscapeError,
    ConfigurationError,
    DimensionError,
    NumericalError,
)

__all__ = [
    "AnsatzBuilder",
    "register_ansatz_family",
    "Settings",
    "get_settings",
    "LandscapeError",
    "ConfigurationError",
    "DimensionError",
    "NumericalError",
]
