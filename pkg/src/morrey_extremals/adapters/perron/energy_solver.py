from typing import override

import numpy as np
from logger import LoggerContract

from domain.contracts.dirichlet_solver import DirichletSolverContract
from domain.contracts.minimizer import MinimizerContract
from domain.services.energy import PinnedEnergy
from domain.types.complement import ComplementData
from domain.types.results import DirichletOutcome
from domain.types.weights import KernelWeights


class EnergyDirichletSolver(DirichletSolverContract):
    """Solves the Dirichlet problem by minimizing the energy over the free nodes."""

    def __init__(self, minimizer: MinimizerContract, logger: LoggerContract) -> None:
        """Initialize the solver.

        Args:
            minimizer (MinimizerContract): Minimizer of the constrained energy.
            logger (LoggerContract): The logger instance for logging.
        """
        self.minimizer = minimizer
        self.logger = logger

    @override
    def solve(
        self,
        weights: KernelWeights,
        data: ComplementData,
        tol: float,
        max_iter: int,
        initial: np.ndarray | None = None,
    ) -> DirichletOutcome:
        objective = PinnedEnergy(weights, ~data.domain_mask, data.g, data.far_field)
        start = np.array(data.g, dtype=float)
        if initial is None:
            start[data.domain_mask] = float(np.mean(data.g[~data.domain_mask]))
        else:
            start[data.domain_mask] = np.asarray(initial, dtype=float)[data.domain_mask]
        outcome = self.minimizer.minimize(
            objective, objective.split(start), tol, max_iter
        )
        values, _ = objective.assemble(outcome.x)
        self.logger.debug(
            "Energy Dirichlet solve finished",
            context={
                "iterations": outcome.iterations,
                "grad_norm": outcome.grad_norm,
                "converged": outcome.converged,
            },
        )
        return DirichletOutcome(
            values=values,
            iterations=outcome.iterations,
            grad_norm=outcome.grad_norm,
            converged=outcome.converged,
        )
