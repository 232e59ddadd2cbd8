"""This file contains pytest fixtures available to all tests.

Fixtures are functions that pytest runs before tests to set up preconditions.
pytest automatically discovers this file and makes fixtures available
to all test modules without needing to import them.
"""

import pytest
from logger import LoggerContract
from pytest_mock import MockerFixture

from adapters.optimization.newton import NewtonMinimizer
from domain.services.extremal_service import ExtremalService
from domain.services.grid import build_lattice
from domain.services.seminorm import build_weights
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.pins import PinSpec
from domain.types.results import ExtremalResult
from domain.types.weights import KernelWeights


@pytest.fixture
def mock_logger(mocker: MockerFixture) -> LoggerContract:
    """Mock logger fixture."""
    return mocker.Mock(spec=LoggerContract)


@pytest.fixture
def params_1d() -> FracParams:
    """Linear parameters on the line."""
    return FracParams(n=1, s=0.8, p=2.0)


@pytest.fixture
def params_1d_p3() -> FracParams:
    """Nonlinear parameters on the line."""
    return FracParams(n=1, s=0.8, p=3.0)


@pytest.fixture
def params_1d_p15() -> FracParams:
    """Sublinear parameters on the line."""
    return FracParams(n=1, s=0.8, p=1.5)


@pytest.fixture
def params_2d() -> FracParams:
    """Planar parameters of the slit problem."""
    return FracParams(n=2, s=0.9, p=4.0)


@pytest.fixture
def lattice_1d(params_1d: FracParams) -> Lattice:
    """17 nodes on [-2, 2]."""
    return build_lattice(params_1d, 2.0, 0.25)


@pytest.fixture
def weights_1d(lattice_1d: Lattice) -> KernelWeights:
    """Weights of lattice_1d."""
    return build_weights(lattice_1d)


@pytest.fixture
def lattice_1d_p3(params_1d_p3: FracParams) -> Lattice:
    """9 nodes on [-1, 1] with p = 3."""
    return build_lattice(params_1d_p3, 1.0, 0.25)


@pytest.fixture
def weights_1d_p3(lattice_1d_p3: Lattice) -> KernelWeights:
    """Weights of lattice_1d_p3."""
    return build_weights(lattice_1d_p3)


@pytest.fixture
def lattice_1d_p15(params_1d_p15: FracParams) -> Lattice:
    """9 nodes on [-1, 1] with p = 1.5."""
    return build_lattice(params_1d_p15, 1.0, 0.25)


@pytest.fixture
def weights_1d_p15(lattice_1d_p15: Lattice) -> KernelWeights:
    """Weights of lattice_1d_p15."""
    return build_weights(lattice_1d_p15)


@pytest.fixture
def lattice_2d(params_2d: FracParams) -> Lattice:
    """9 x 9 nodes on [-1, 1]^2."""
    return build_lattice(params_2d, 1.0, 0.25)


@pytest.fixture
def weights_2d(lattice_2d: Lattice) -> KernelWeights:
    """Weights of lattice_2d."""
    return build_weights(lattice_2d)


@pytest.fixture
def newton_service(mock_logger: LoggerContract) -> ExtremalService:
    """Extremal service backed by the Newton minimizer."""
    return ExtremalService(minimizer=NewtonMinimizer(mock_logger))


@pytest.fixture
def canonical_extremal(
    newton_service: ExtremalService,
    lattice_1d: Lattice,
    weights_1d: KernelWeights,
) -> ExtremalResult:
    """Canonical extremal on lattice_1d, solved to a 1e-10 gradient."""
    return newton_service.solve_extremal(
        lattice_1d,
        weights_1d,
        PinSpec.canonical(lattice_1d),
        tol=1e-10,
        max_iter=50,
    )
