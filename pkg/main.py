# -*- coding: utf-8 -*-
"""
Main entry point for the VQA landscape laboratory.

Usage:
    python main.py <command> [options]

Commands:
    - hamiltonian: spectral statistics and mapping diagnostics
    - experiment: batch of VQE training instances plus a histogram script
    - train: one training instance with its trajectory
    - predict: band, band edge and asymptotic local-minima curve for gamma
    - crt: Monte Carlo critical-point profile
    - spectrum: random-matrix eigenvalue samples next to their limit
"""

import os
import sys

# Ensure project root is in path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from src.cli.app import run


def main() -> None:
    """
    Main entry point.

    Prints the banner to stderr and dispatches to the CLI.
    """
    print("=" * 60, file=sys.stderr)
    print("VQA Landscape Laboratory", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
