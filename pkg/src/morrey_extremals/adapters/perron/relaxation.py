from abc import abstractmethod
from typing import override

import numpy as np
from logger import LoggerContract

from domain.contracts.dirichlet_solver import DirichletSolverContract
from domain.services.operator import j_p, node_balance
from domain.types.complement import ComplementData
from domain.types.results import DirichletOutcome
from domain.types.weights import KernelWeights

BISECTION_STEPS = 100


def _initial_values(data: ComplementData, initial: np.ndarray | None) -> np.ndarray:
    values = np.array(data.g, dtype=float)
    free = data.domain_mask
    if initial is None:
        values[free] = float(np.mean(data.g[~free]))
    else:
        values[free] = np.asarray(initial, dtype=float)[free]
    return values


def local_solve(
    rows: np.ndarray,
    values: np.ndarray,
    exterior: np.ndarray,
    far_field: float,
    p: float,
) -> np.ndarray:
    """Roots t_k of sum_j w_kj J_p(t_k - u_j) + e_k J_p(t_k - f) = 0, by bisection.

    The map is increasing in t_k, so the root lies between the smallest and
    largest value the node interacts with.

    Args:
        rows (np.ndarray): Pair weights of the nodes, one row each.
        values (np.ndarray): Current node values.
        exterior (np.ndarray): Exterior weights of the nodes.
        far_field (float): Far-field value.
        p (float): Integrability exponent.

    Returns:
        np.ndarray: The local solution at every node of the block.
    """
    coupled = rows > 0
    low = np.where(coupled, values[None, :], np.inf).min(axis=1)
    high = np.where(coupled, values[None, :], -np.inf).max(axis=1)
    has_exterior = exterior > 0
    low = np.where(has_exterior, np.minimum(low, far_field), low)
    high = np.where(has_exterior, np.maximum(high, far_field), high)
    for _ in range(BISECTION_STEPS):
        middle = 0.5 * (low + high)
        balance = np.sum(
            rows * j_p(middle[:, None] - values[None, :], p), axis=1
        ) + exterior * j_p(middle - far_field, p)
        positive = balance > 0
        high = np.where(positive, middle, high)
        low = np.where(positive, low, middle)
        if np.all(high - low <= 4.0 * np.finfo(float).eps * np.abs(middle)):
            break
    return 0.5 * (low + high)


class _RelaxationSolver(DirichletSolverContract):
    """Shared sweep loop of the nonlinear relaxation solvers."""

    name = "relaxation"

    def __init__(self, logger: LoggerContract, log_every: int = 100) -> None:
        """Initialize the solver.

        Args:
            logger (LoggerContract): The logger instance for logging.
            log_every (int): Sweeps between progress messages.
        """
        self.logger = logger
        self.log_every = log_every

    @abstractmethod
    def _sweep(
        self,
        weights: KernelWeights,
        values: np.ndarray,
        free: np.ndarray,
        far_field: float,
    ) -> None:
        """Relaxes the free nodes once, updating values in place."""

    @override
    def solve(
        self,
        weights: KernelWeights,
        data: ComplementData,
        tol: float,
        max_iter: int,
        initial: np.ndarray | None = None,
    ) -> DirichletOutcome:
        p = weights.lattice.params.p
        free = data.free_nodes
        values = _initial_values(data, initial)

        def gradient_norm() -> float:
            balance, _ = node_balance(values, data.far_field, weights, free)
            return 2.0 * p * float(np.max(np.abs(balance)))

        grad_norm = gradient_norm()
        sweeps = 0
        self.logger.debug(
            "Starting relaxation",
            context={"method": self.name, "free_nodes": free.size},
        )
        while grad_norm > tol and sweeps < max_iter:
            sweeps += 1
            self._sweep(weights, values, free, data.far_field)
            grad_norm = gradient_norm()
            if sweeps % self.log_every == 0:
                self.logger.debug(
                    "Relaxation progress",
                    context={
                        "method": self.name,
                        "sweep": sweeps,
                        "grad_norm": grad_norm,
                    },
                )

        self.logger.debug(
            "Relaxation finished",
            context={"method": self.name, "sweeps": sweeps, "grad_norm": grad_norm},
        )
        return DirichletOutcome(
            values=values,
            iterations=sweeps,
            grad_norm=grad_norm,
            converged=grad_norm <= tol,
        )


class GaussSeidelSolver(_RelaxationSolver):
    """Nonlinear Gauss-Seidel: free nodes are relaxed one at a time, in order."""

    name = "gauss_seidel"

    @override
    def _sweep(
        self,
        weights: KernelWeights,
        values: np.ndarray,
        free: np.ndarray,
        far_field: float,
    ) -> None:
        p = weights.lattice.params.p
        exterior = weights.exterior_at(free)
        for position, node in enumerate(free):
            values[node] = local_solve(
                weights.rows(np.array([node])),
                values,
                exterior[position : position + 1],
                far_field,
                p,
            )[0]


class JacobiSolver(_RelaxationSolver):
    """Damped nonlinear Jacobi: all free nodes are relaxed simultaneously."""

    name = "jacobi"

    def __init__(
        self,
        logger: LoggerContract,
        damping: float = 0.5,
        log_every: int = 100,
    ) -> None:
        """Initialize the solver.

        Args:
            logger (LoggerContract): The logger instance for logging.
            damping (float): Weight of the local solution in each update.
            log_every (int): Sweeps between progress messages.
        """
        super().__init__(logger, log_every)
        self.damping = damping

    @override
    def _sweep(
        self,
        weights: KernelWeights,
        values: np.ndarray,
        free: np.ndarray,
        far_field: float,
    ) -> None:
        p = weights.lattice.params.p
        frozen = values.copy()
        for block, rows in weights.iter_row_blocks(free):
            solution = local_solve(
                rows, frozen, weights.exterior_at(block), far_field, p
            )
            values[block] = (1.0 - self.damping) * frozen[block] + (
                self.damping * solution
            )
