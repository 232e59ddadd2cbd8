from collections.abc import Callable
from pathlib import Path

from logger import LoggerContract

from adapters.exceptions import ConfigFileError
from adapters.infrastructure.config.run_config import RunConfig
from adapters.infrastructure.storage.filesystem import FileSystemArtifactRepository
from adapters.optimization.gradient_descent import GradientDescentMinimizer
from adapters.optimization.lbfgs import LbfgsMinimizer
from adapters.optimization.linear import LinearSolveMinimizer
from adapters.optimization.newton import NewtonMinimizer
from adapters.perron.energy_solver import EnergyDirichletSolver
from adapters.perron.relaxation import GaussSeidelSolver, JacobiSolver
from domain.contracts.dirichlet_solver import DirichletSolverContract
from domain.contracts.minimizer import MinimizerContract
from domain.contracts.repository import ArtifactRepositoryContract
from domain.services.extremal_service import ExtremalService
from domain.services.perron_service import PerronService
from domain.types.enums import DirichletMethod, OptimizerMode

MINIMIZER_REGISTRY: dict[
    OptimizerMode,
    Callable[[LoggerContract, float], MinimizerContract],
] = {
    OptimizerMode.GRADIENT: lambda logger, _: GradientDescentMinimizer(logger),
    OptimizerMode.NEWTON: lambda logger, floor: NewtonMinimizer(logger, floor),
    OptimizerMode.LBFGS: lambda logger, _: LbfgsMinimizer(logger),
    OptimizerMode.LINEAR: lambda logger, _: LinearSolveMinimizer(logger),
}

DIRICHLET_REGISTRY: dict[
    DirichletMethod,
    Callable[[LoggerContract, float], DirichletSolverContract],
] = {
    DirichletMethod.GAUSS_SEIDEL: lambda logger, _: GaussSeidelSolver(logger),
    DirichletMethod.JACOBI: lambda logger, _: JacobiSolver(logger),
    DirichletMethod.NEWTON: lambda logger, floor: EnergyDirichletSolver(
        NewtonMinimizer(logger, floor), logger
    ),
}

# Modes assembling dense N x N matrices.
DENSE_OPTIMIZERS = frozenset({OptimizerMode.NEWTON, OptimizerMode.LINEAR})


def get_minimizer(
    mode: OptimizerMode,
    logger: LoggerContract,
    floor_ratio: float = 1e-3,
) -> MinimizerContract:
    """Creates the minimizer registered for a mode.

    Args:
        mode (OptimizerMode): Requested minimizer.
        logger (LoggerContract): The logger instance for logging.
        floor_ratio (float): Newton difference floor, ignored by other modes.

    Raises:
        ConfigFileError: If no minimizer is registered for the mode.

    Returns:
        MinimizerContract: The minimizer.
    """
    factory = MINIMIZER_REGISTRY.get(mode)
    if factory is None:
        raise ConfigFileError(f"No minimizer registered for optimizer='{mode}'")
    return factory(logger, floor_ratio)


def get_dirichlet_solver(
    method: DirichletMethod,
    logger: LoggerContract,
    floor_ratio: float = 1e-3,
) -> DirichletSolverContract:
    """Creates the Dirichlet solver registered for a method.

    Raises:
        ConfigFileError: If no solver is registered for the method.
    """
    factory = DIRICHLET_REGISTRY.get(method)
    if factory is None:
        raise ConfigFileError(f"No Dirichlet solver registered for method='{method}'")
    return factory(logger, floor_ratio)


def get_extremal_service(config: RunConfig, logger: LoggerContract) -> ExtremalService:
    """Creates the extremal service with the configured minimizer."""
    return ExtremalService(
        minimizer=get_minimizer(
            config.solver.optimizer,
            logger,
            config.solver.floor_ratio,
        ),
    )


def get_perron_service(config: RunConfig, logger: LoggerContract) -> PerronService:
    """Creates the Perron service with the configured Dirichlet solver."""
    return PerronService(
        solver=get_dirichlet_solver(
            config.perron.method,
            logger,
            config.solver.floor_ratio,
        ),
    )


def get_repository(root: Path, logger: LoggerContract) -> ArtifactRepositoryContract:
    """Creates the artifact repository writing below root."""
    return FileSystemArtifactRepository(root=root, logger=logger)
