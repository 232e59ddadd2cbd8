from abc import ABC, abstractmethod

import numpy as np

from domain.services.energy import PinnedEnergy
from domain.types.results import OptimizationOutcome


class MinimizerContract(ABC):
    """Contract for minimizers of the pinned p-energy."""

    @abstractmethod
    def minimize(
        self,
        objective: PinnedEnergy,
        x0: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> OptimizationOutcome:
        """Minimizes the objective starting from x0.

        Args:
            objective (PinnedEnergy): The convex objective.
            x0 (np.ndarray): Initial point in the free variables.
            tol (float): Target max-norm of the gradient.
            max_iter (int): Iteration budget.

        Raises:
            OptimizerError: If the minimizer cannot handle the objective.

        Returns:
            OptimizationOutcome: Final iterate; converged is False when the
            budget ran out first.
        """
        raise NotImplementedError
