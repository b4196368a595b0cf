# -*- coding: utf-8 -*-
"""Command-line interface."""

from src.cli.app import main, run

__all__ = ["main", "run"]
