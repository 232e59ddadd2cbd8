from typing import override

import numpy as np
import scipy.optimize
from logger import LoggerContract

from adapters.exceptions import OptimizerError
from adapters.optimization.line_search import snap_to_far_field
from domain.contracts.minimizer import MinimizerContract
from domain.services.energy import PinnedEnergy
from domain.types.results import OptimizationOutcome


class LbfgsMinimizer(MinimizerContract):
    """Limited-memory BFGS through scipy's L-BFGS-B.

    For p < 2 the final point has its free values next to the far field
    snapped onto it when that does not raise the energy.
    """

    def __init__(self, logger: LoggerContract, memory: int = 20) -> None:
        """Initialize the minimizer.

        Args:
            logger (LoggerContract): The logger instance for logging.
            memory (int): Number of stored correction pairs.
        """
        self.logger = logger
        self.memory = memory

    @override
    def minimize(
        self,
        objective: PinnedEnergy,
        x0: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> OptimizationOutcome:
        history = [objective.value(np.asarray(x0, dtype=float))]

        def record(intermediate_result: scipy.optimize.OptimizeResult) -> None:
            history.append(float(intermediate_result.fun))

        try:
            result = scipy.optimize.minimize(
                objective.value_and_gradient,
                np.asarray(x0, dtype=float),
                jac=True,
                method="L-BFGS-B",
                callback=record,
                options={
                    "maxiter": max_iter,
                    "maxfun": 20 * max_iter,
                    "maxcor": self.memory,
                    "gtol": tol,
                    "ftol": 0.0,
                },
            )
        except (ValueError, FloatingPointError) as e:
            self.logger.exception(
                "L-BFGS-B failed",
                context={"dimension": objective.dimension, "error": str(e)},
                exc=e,
            )
            raise OptimizerError(f"L-BFGS-B failed: {e}") from e

        x, value = snap_to_far_field(
            objective, np.asarray(result.x, dtype=float), float(result.fun)
        )
        if value < history[-1]:
            history.append(value)
        grad_norm = float(np.max(np.abs(objective.gradient(x)), initial=0.0))
        self.logger.debug(
            "L-BFGS-B finished",
            context={
                "iterations": int(result.nit),
                "grad_norm": grad_norm,
                "message": str(result.message),
            },
        )
        return OptimizationOutcome(
            x=x,
            iterations=int(result.nit),
            grad_norm=grad_norm,
            converged=grad_norm <= tol,
            energy_history=tuple(history),
        )
