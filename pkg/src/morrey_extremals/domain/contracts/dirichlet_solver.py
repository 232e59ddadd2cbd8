from abc import ABC, abstractmethod

import numpy as np

from domain.types.complement import ComplementData
from domain.types.results import DirichletOutcome
from domain.types.weights import KernelWeights


class DirichletSolverContract(ABC):
    """Contract for solvers of the discrete nonlocal Dirichlet problem."""

    @abstractmethod
    def solve(
        self,
        weights: KernelWeights,
        data: ComplementData,
        tol: float,
        max_iter: int,
        initial: np.ndarray | None = None,
    ) -> DirichletOutcome:
        """Finds node values that are discrete (s,p)-harmonic on the free nodes.

        Args:
            weights (KernelWeights): Pair and exterior weights.
            data (ComplementData): Domain and complement values.
            tol (float): Target max-norm of the energy gradient on free nodes.
            max_iter (int): Sweep or iteration budget.
            initial (np.ndarray | None): Initial node values; free nodes start
                at the mean of the data when None.

        Returns:
            DirichletOutcome: Final values; converged is False when the budget
            ran out first.
        """
        raise NotImplementedError
