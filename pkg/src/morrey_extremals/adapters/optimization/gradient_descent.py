from typing import override

import numpy as np
from logger import LoggerContract

from adapters.optimization.line_search import (
    backtracking_line_search,
    snap_to_far_field,
)
from domain.contracts.minimizer import MinimizerContract
from domain.services.energy import PinnedEnergy
from domain.types.results import OptimizationOutcome

GROWTH = 2.0


class GradientDescentMinimizer(MinimizerContract):
    """Diagonally preconditioned gradient descent with an adaptive step.

    The direction is -g / D with D the diagonal metric of the objective. Each
    accepted step lets the next trial step grow by a factor of two, capped at 1.
    For p < 2 free values next to the far field are snapped onto it after each
    step when that does not raise the energy.
    """

    def __init__(self, logger: LoggerContract, log_every: int = 1000) -> None:
        """Initialize the minimizer.

        Args:
            logger (LoggerContract): The logger instance for logging.
            log_every (int): Iterations between progress messages.
        """
        self.logger = logger
        self.log_every = log_every

    @override
    def minimize(
        self,
        objective: PinnedEnergy,
        x0: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> OptimizationOutcome:
        metric = objective.diagonal_metric()
        metric = np.where(metric > 0, metric, 1.0)
        x = np.array(x0, dtype=float)
        value, gradient = objective.value_and_gradient(x)
        history = [value]
        step = 1.0
        grad_norm = float(np.max(np.abs(gradient), initial=0.0))
        iteration = 0
        self.logger.debug(
            "Starting gradient descent",
            context={"dimension": objective.dimension, "energy": value},
        )
        while grad_norm > tol and iteration < max_iter:
            iteration += 1
            direction = -gradient / metric
            step, x_next, value_next = backtracking_line_search(
                objective.value, x, value, gradient, direction, step=step
            )
            if step == 0.0:
                self.logger.info(
                    "Gradient descent stalled",
                    context={"iteration": iteration, "grad_norm": grad_norm},
                )
                break
            x, value = snap_to_far_field(objective, x_next, value_next)
            gradient = objective.gradient(x)
            grad_norm = float(np.max(np.abs(gradient), initial=0.0))
            history.append(value)
            step = min(1.0, GROWTH * step)
            if iteration % self.log_every == 0:
                self.logger.debug(
                    "Gradient descent progress",
                    context={
                        "iteration": iteration,
                        "energy": value,
                        "grad_norm": grad_norm,
                    },
                )

        return OptimizationOutcome(
            x=x,
            iterations=iteration,
            grad_norm=grad_norm,
            converged=grad_norm <= tol,
            energy_history=tuple(history),
        )
