# -*- coding: utf-8 -*-
"""
Gradient descent with momentum on the normalized VQE loss.

The loss is (E - lambda_min) / c_vqa, so a converged run reports where in the
band of normalized energies it got stuck. Updates follow

    v <- momentum * v - learning_rate * grad
    theta <- theta + v

and a run halts once the loss changed by no more than ``tol`` for ``patience``
consecutive iterations while the gradient norm is at most ``grad_tol``, or at
``max_iters``. A stall away from a critical point keeps descending.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from src.core.config import TrainingConfig
from src.core.exceptions import DimensionError, TrainingAbortedError
from src.core.log import get_logger
from src.quantum.hamiltonian import SpectralStats
from src.quantum.simulator import AnsatzProgram, Operator, energy_and_gradient, normalized_energy

logger = get_logger("Trainer")

IterationCallback = Callable[[int, np.ndarray], None]


class HaltReason(str, Enum):
    """Why a training run stopped."""

    TOL = "tol"
    MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class TrainingResult:
    """
    Outcome of one training run.

    Attributes:
        final_params: Parameters at the halting iteration.
        final_normalized_energy: Loss at final_params.
        initial_normalized_energy: Loss at the starting point.
        iterations_used: Iterations performed.
        halt_reason: tol or max_iters.
        energy_trajectory: Loss every ``record_every`` iterations, first and last included.
        trajectory_iterations: Iteration numbers of the trajectory entries.
        final_gradient_norm: Euclidean norm of the normalized-loss gradient at the end.
    """

    final_params: np.ndarray = field(repr=False)
    final_normalized_energy: float
    initial_normalized_energy: float
    iterations_used: int
    halt_reason: HaltReason
    energy_trajectory: np.ndarray = field(repr=False)
    trajectory_iterations: np.ndarray = field(repr=False)
    final_gradient_norm: float


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    """Map angles onto [-pi, pi)."""
    return (theta + np.pi) % (2.0 * np.pi) - np.pi


def random_initial_params(p: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the hypertorus [-pi, pi)^p."""
    return rng.uniform(-np.pi, np.pi, size=p)


def train(
    a: AnsatzProgram,
    h: Operator,
    stats: SpectralStats,
    cfg: Optional[TrainingConfig] = None,
    init_params: Optional[Sequence[float]] = None,
    callback: Optional[IterationCallback] = None,
) -> TrainingResult:
    """
    Minimize the normalized energy of an ansatz.

    Args:
        a: Ansatz program.
        h: Hamiltonian.
        stats: Spectral stats used for normalization.
        cfg: Optimizer settings (defaults: lr 0.05, momentum 0.9, tol 1e-5, 10^6 iterations).
        init_params: Starting point; drawn uniformly from cfg.seed when omitted.
        callback: Called as callback(iteration, params) after every update.

    Returns:
        TrainingResult.

    Raises:
        TrainingAbortedError: If the loss or gradient becomes non-finite.
    """
    cfg = cfg or TrainingConfig()
    if init_params is None:
        theta = random_initial_params(a.p, np.random.default_rng(cfg.seed))
    else:
        theta = np.array(init_params, dtype=float)
    if theta.shape != (a.p,):
        raise DimensionError("trainer", f"program has {a.p} parameters, got {theta.shape}")

    def evaluate(params: np.ndarray, iteration: int):
        raw, raw_grad = energy_and_gradient(a, params, h, cfg.gradient_mode, cfg.fd_step)
        value = normalized_energy(raw, stats)
        grad = raw_grad / stats.c_vqa
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            raise TrainingAbortedError("non-finite loss or gradient", iteration, params)
        return value, grad

    loss, grad = evaluate(theta, 0)
    initial = loss
    trajectory = [loss]
    trajectory_iterations = [0]
    velocity = np.zeros_like(theta)
    stalls = 0
    reason = HaltReason.MAX_ITERS
    iteration = 0

    for iteration in range(1, cfg.max_iters + 1):
        velocity = cfg.momentum * velocity - cfg.learning_rate * grad
        theta = theta + velocity
        if a.is_periodic:
            theta = wrap_angles(theta)

        new_loss, grad = evaluate(theta, iteration)
        if callback is not None:
            callback(iteration, theta)
        if iteration % cfg.record_every == 0:
            trajectory.append(new_loss)
            trajectory_iterations.append(iteration)

        stalls = stalls + 1 if abs(loss - new_loss) <= cfg.tol else 0
        loss = new_loss
        if stalls >= cfg.patience and np.linalg.norm(grad) <= cfg.grad_tol:
            reason = HaltReason.TOL
            break

    if trajectory_iterations[-1] != iteration:
        trajectory.append(loss)
        trajectory_iterations.append(iteration)

    logger.debug(
        f"halted after {iteration} iterations ({reason.value}): {initial:.6f} -> {loss:.6f}"
    )
    return TrainingResult(
        final_params=theta,
        final_normalized_energy=float(loss),
        initial_normalized_energy=float(initial),
        iterations_used=iteration,
        halt_reason=reason,
        energy_trajectory=np.array(trajectory),
        trajectory_iterations=np.array(trajectory_iterations),
        final_gradient_norm=float(np.linalg.norm(grad)),
    )
