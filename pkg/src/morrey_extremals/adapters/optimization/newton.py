from typing import override

import numpy as np
import scipy.linalg
from logger import LoggerContract

from adapters.optimization.line_search import (
    backtracking_line_search,
    snap_to_far_field,
)
from domain.contracts.minimizer import MinimizerContract
from domain.services.energy import PinnedEnergy
from domain.types.results import OptimizationOutcome


class NewtonMinimizer(MinimizerContract):
    """Damped Newton method on the dense Hessian of the pinned energy.

    For p < 2 the curvature weights |u_i - u_j|^(p-2) are evaluated with the
    differences floored at the smaller of floor_ratio times the value spread
    and the current gradient norm, and after every step the free values next
    to the far field are snapped onto it when that does not raise the energy.
    Steps are damped by Armijo backtracking. Near the minimum, where the
    energy decrease drops below rounding, a full step is still taken when it
    reduces the gradient and its pairwise energy change is not positive.
    """

    def __init__(self, logger: LoggerContract, floor_ratio: float = 1e-3) -> None:
        """Initialize the minimizer.

        Args:
            logger (LoggerContract): The logger instance for logging.
            floor_ratio (float): Difference floor relative to the value spread.
        """
        self.logger = logger
        self.floor_ratio = floor_ratio

    def _floor(self, objective: PinnedEnergy, x: np.ndarray, grad_norm: float) -> float:
        if objective.p >= 2.0:
            return 0.0
        spread = objective.spread(x)
        floor = self.floor_ratio * (spread if spread > 0 else 1.0)
        return min(floor, grad_norm) if grad_norm > 0 else floor

    def _direction(
        self,
        objective: PinnedEnergy,
        x: np.ndarray,
        gradient: np.ndarray,
        grad_norm: float,
    ) -> np.ndarray:
        hessian = objective.hessian(x, self._floor(objective, x, grad_norm))
        try:
            direction = scipy.linalg.solve(hessian, -gradient, assume_a="pos")
        except (scipy.linalg.LinAlgError, ValueError) as e:
            self.logger.debug(
                "Hessian solve failed, using the diagonal metric",
                context={"error": str(e)},
            )
            direction = None
        if (
            direction is None
            or not np.all(np.isfinite(direction))
            or float(gradient @ direction) >= 0
        ):
            metric = objective.diagonal_metric()
            return -gradient / np.where(metric > 0, metric, 1.0)
        return direction

    @override
    def minimize(
        self,
        objective: PinnedEnergy,
        x0: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> OptimizationOutcome:
        x = np.array(x0, dtype=float)
        value, gradient = objective.value_and_gradient(x)
        history = [value]
        grad_norm = float(np.max(np.abs(gradient), initial=0.0))
        iteration = 0
        self.logger.debug(
            "Starting Newton iterations",
            context={"dimension": objective.dimension, "energy": value},
        )
        while grad_norm > tol and iteration < max_iter:
            iteration += 1
            direction = self._direction(objective, x, gradient, grad_norm)
            step, x_next, value_next = backtracking_line_search(
                objective.value, x, value, gradient, direction
            )
            if step == 0.0:
                x_next = x + direction
                gradient_next = objective.gradient(x_next)
                change = objective.change(x, direction)
                if np.max(np.abs(gradient_next)) >= grad_norm or change > 0.0:
                    self.logger.info(
                        "Newton iterations stalled",
                        context={
                            "iteration": iteration,
                            "grad_norm": grad_norm,
                            "energy_change": change,
                        },
                    )
                    break
                value_next = value + change
            x, value = snap_to_far_field(objective, x_next, value_next)
            gradient = objective.gradient(x)
            grad_norm = float(np.max(np.abs(gradient), initial=0.0))
            history.append(value)
            self.logger.debug(
                "Newton step",
                context={
                    "iteration": iteration,
                    "step": step,
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
