# -*- coding: utf-8 -*-
"""Services module: ansatz construction, training and experiments."""

from src.services.ansatz import build_hva_ansatz, build_random_ansatz
from src.services.trainer import TrainingResult, train
from src.services.experiment import ExperimentRunner, run_experiment

__all__ = [
    "build_hva_ansatz",
    "build_random_ansatz",
    "TrainingResult",
    "train",
    "ExperimentRunner",
    "run_experiment",
]
