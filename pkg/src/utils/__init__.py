# -*- coding: utf-8 -*-
"""Utility functions module."""

from src.utils.seeding import Stream, derive_generator, derive_seed

__all__ = ["Stream", "derive_generator", "derive_seed"]
