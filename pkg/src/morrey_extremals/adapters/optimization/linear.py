from typing import override

import numpy as np
import scipy.linalg
from logger import LoggerContract

from adapters.exceptions import OptimizerError
from domain.contracts.minimizer import MinimizerContract
from domain.services.energy import PinnedEnergy
from domain.types.results import OptimizationOutcome


class LinearSolveMinimizer(MinimizerContract):
    """Direct solve of the linear Euler-Lagrange system, valid for p = 2 only.

    The quadratic energy is minimized by one Cholesky solve; further solves
    refine the iterate while the gradient exceeds the tolerance.
    """

    def __init__(self, logger: LoggerContract) -> None:
        """Initialize the minimizer.

        Args:
            logger (LoggerContract): The logger instance for logging.
        """
        self.logger = logger

    @override
    def minimize(
        self,
        objective: PinnedEnergy,
        x0: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> OptimizationOutcome:
        if objective.p != 2.0:
            raise OptimizerError(
                f"The linear solver needs p = 2, got p = {objective.p}"
            )
        x = np.array(x0, dtype=float)
        history = [objective.value(x)]
        gradient = objective.gradient(x)
        grad_norm = float(np.max(np.abs(gradient), initial=0.0))
        hessian = objective.hessian(x, 0.0)
        try:
            factor = scipy.linalg.cho_factor(hessian)
        except scipy.linalg.LinAlgError as e:
            self.logger.exception(
                "Energy Hessian is not positive definite",
                context={"dimension": objective.dimension},
                exc=e,
            )
            raise OptimizerError(f"Cannot factor the energy Hessian: {e}") from e

        iteration = 0
        while grad_norm > tol and iteration < max_iter:
            iteration += 1
            x = x - scipy.linalg.cho_solve(factor, gradient)
            gradient = objective.gradient(x)
            grad_norm = float(np.max(np.abs(gradient), initial=0.0))
            history.append(objective.value(x))
            self.logger.debug(
                "Linear solve",
                context={"iteration": iteration, "grad_norm": grad_norm},
            )

        return OptimizationOutcome(
            x=x,
            iterations=iteration,
            grad_norm=grad_norm,
            converged=grad_norm <= tol,
            energy_history=tuple(history),
        )
