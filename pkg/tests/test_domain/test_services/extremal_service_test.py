"""Test module for ExtremalService."""

import numpy as np
import pytest
from logger import LoggerContract
from pytest_mock import MockerFixture
from scipy.optimize import minimize_scalar

from adapters.optimization.linear import LinearSolveMinimizer
from adapters.optimization.newton import NewtonMinimizer
from domain.contracts.minimizer import MinimizerContract
from domain.exceptions import (
    DegenerateError,
    GeometryError,
    MismatchError,
    NonConvergenceError,
    PreconditionError,
    UnmappablePairError,
    ValidationError,
)
from domain.services.energy import PinnedEnergy
from domain.services.extremal_service import ExtremalService, initial_values
from domain.services.grid import build_lattice
from domain.services.sampling import RandomStreams, random_grid_function
from domain.services.seminorm import build_weights
from domain.types.enums import FarFieldMode, InitialGuess
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.pins import PinSpec
from domain.types.results import ExtremalResult, OptimizationOutcome
from domain.types.weights import KernelWeights


class TestInitialValues:
    """Test class for initial_values."""

    def test_linear(self, lattice_1d: Lattice) -> None:
        """Test the interpolation between the pins, constant beyond them."""
        pins = PinSpec.canonical(lattice_1d)
        values = initial_values(lattice_1d, pins, InitialGuess.LINEAR)

        assert values[lattice_1d.index_of((0.0,))] == 0.0
        assert values[lattice_1d.index_of((0.5,))] == 0.5
        assert values[lattice_1d.index_of((2.0,))] == 1.0
        assert values[lattice_1d.index_of((-2.0,))] == -1.0

    def test_zero(self, lattice_1d: Lattice) -> None:
        """Test the midpoint start with the pins set."""
        pins = PinSpec(12, 4, 3.0, 1.0)
        values = initial_values(lattice_1d, pins, InitialGuess.ZERO)

        assert values[0] == 2.0
        assert values[12] == 3.0
        assert values[4] == 1.0

    def test_random(self, lattice_1d: Lattice) -> None:
        """Test the random start stays between the pinned values."""
        pins = PinSpec.canonical(lattice_1d)
        rng = RandomStreams(0).generator("initial")
        values = initial_values(lattice_1d, pins, InitialGuess.RANDOM, rng)

        assert np.all((values >= -1.0) & (values <= 1.0))
        with pytest.raises(ValidationError):
            initial_values(lattice_1d, pins, InitialGuess.RANDOM)

    def test_explicit_array(self, lattice_1d: Lattice) -> None:
        """Test that explicit arrays are copied and pinned."""
        pins = PinSpec.canonical(lattice_1d)
        start = np.full(lattice_1d.node_count, 0.25)
        values = initial_values(lattice_1d, pins, start)

        assert start[12] == 0.25
        assert values[12] == 1.0
        with pytest.raises(ValidationError):
            initial_values(lattice_1d, pins, np.zeros(3))


class TestSolveExtremal:
    """Test class for ExtremalService.solve_extremal."""

    def test_canonical_extremal(
        self,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
    ) -> None:
        """Test the pins, the sharp constant and the Hölder argpair."""
        u = canonical_extremal.u

        assert canonical_extremal.final_grad_norm <= 1e-10
        assert u.values[12] == 1.0
        assert u.values[4] == -1.0
        assert u.far_field == 0.0
        assert canonical_extremal.c_star_hat == pytest.approx(
            canonical_extremal.holder / canonical_extremal.gagliardo
        )
        assert canonical_extremal.energy_history[0] >= (
            canonical_extremal.energy_history[-1]
        )

    def test_optimizers_agree(
        self,
        mock_logger: LoggerContract,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that the direct linear solve reproduces the Newton extremal."""
        service = ExtremalService(minimizer=LinearSolveMinimizer(mock_logger))
        res = service.solve_extremal(
            lattice_1d, weights_1d, PinSpec.canonical(lattice_1d), tol=1e-10
        )

        assert np.allclose(res.u.values, canonical_extremal.u.values, atol=1e-9)
        assert res.c_star_hat == pytest.approx(canonical_extremal.c_star_hat)

    def test_free_far_field(
        self,
        newton_service: ExtremalService,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that the optimal far field of symmetric pins is the midpoint."""
        res = newton_service.solve_extremal(
            lattice_1d,
            weights_1d,
            PinSpec(12, 4, 3.0, 1.0),
            far_field_mode=FarFieldMode.FREE,
        )

        assert res.far_field_mode is FarFieldMode.FREE
        assert res.u.far_field == pytest.approx(2.0, abs=1e-6)

    def test_nonlinear_extremal(
        self,
        newton_service: ExtremalService,
        lattice_1d_p3: Lattice,
        weights_1d_p3: KernelWeights,
    ) -> None:
        """Test a p = 3 extremal from a zero start."""
        res = newton_service.solve_extremal(
            lattice_1d_p3,
            weights_1d_p3,
            PinSpec.canonical(lattice_1d_p3),
            initial=InitialGuess.ZERO,
            max_iter=200,
        )

        assert res.final_grad_norm <= 1e-8
        assert np.all(np.diff(res.energy_history) <= 1e-10)
        assert np.all(np.abs(res.u.values) <= 1.0 + 1e-12)

    def test_budget_exhaustion(
        self,
        newton_service: ExtremalService,
        lattice_1d_p3: Lattice,
        weights_1d_p3: KernelWeights,
    ) -> None:
        """Test that a single nonlinear Newton step does not converge."""
        with pytest.raises(NonConvergenceError) as info:
            newton_service.solve_extremal(
                lattice_1d_p3,
                weights_1d_p3,
                PinSpec.canonical(lattice_1d_p3),
                max_iter=1,
            )

        assert info.value.iterations == 1

    def test_invalid_arguments(
        self,
        mocker: MockerFixture,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
        weights_1d_p3: KernelWeights,
    ) -> None:
        """Test the argument validation before any minimization."""
        minimizer = mocker.Mock(spec=MinimizerContract)
        service = ExtremalService(minimizer=minimizer)
        pins = PinSpec.canonical(lattice_1d)

        with pytest.raises(ValidationError):
            service.solve_extremal(lattice_1d, weights_1d, pins, tol=0.0)
        with pytest.raises(ValidationError):
            service.solve_extremal(lattice_1d, weights_1d, pins, max_iter=0)
        with pytest.raises(MismatchError):
            service.solve_extremal(lattice_1d, weights_1d_p3, pins)
        with pytest.raises(GeometryError):
            service.solve_extremal(lattice_1d, weights_1d, PinSpec(12, 40))
        minimizer.minimize.assert_not_called()

    def test_unconverged_outcome(
        self,
        mocker: MockerFixture,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that an unconverged outcome raises with the solver state."""
        minimizer = mocker.Mock(spec=MinimizerContract)
        minimizer.minimize.return_value = OptimizationOutcome(
            x=np.zeros(15), iterations=7, grad_norm=0.5, converged=False
        )
        service = ExtremalService(minimizer=minimizer)

        with pytest.raises(NonConvergenceError) as info:
            service.solve_extremal(
                lattice_1d, weights_1d, PinSpec.canonical(lattice_1d)
            )

        assert info.value.iterations == 7
        assert info.value.grad_norm == 0.5

    def test_estimate_sharp_constant(
        self,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
    ) -> None:
        """Test the estimate and its degenerate case."""
        assert ExtremalService.estimate_sharp_constant(canonical_extremal) == (
            canonical_extremal.c_star_hat
        )
        flat = ExtremalResult(
            GridFunction.constant(lattice_1d, 0.0),
            PinSpec.canonical(lattice_1d),
            0.0,
            0.0,
            0.0,
            0,
            0.0,
        )
        with pytest.raises(DegenerateError):
            ExtremalService.estimate_sharp_constant(flat)


def _coordinate_descent(
    objective: PinnedEnergy,
    x: np.ndarray,
    sweeps: int = 200,
) -> np.ndarray:
    """Minimizes one free value at a time until no value moves."""
    x = np.array(x, dtype=float)
    for _ in range(sweeps):
        moved = 0.0
        for k in range(x.size):

            def along(t: float, k: int = k) -> float:
                trial = x.copy()
                trial[k] = t
                return objective.value(trial)

            best = minimize_scalar(
                along, bounds=(-1.0, 1.0), method="bounded", options={"xatol": 1e-12}
            )
            moved = max(moved, abs(best.x - x[k]))
            x[k] = best.x
        if moved <= 1e-10:
            break
    return x


class TestAgainstCoordinateDescent:
    """Test class comparing the extremals with a coordinate-wise minimization."""

    def test_sublinear_extremal(
        self,
        newton_service: ExtremalService,
        lattice_1d_p15: Lattice,
        weights_1d_p15: KernelWeights,
    ) -> None:
        """Test a p = 1.5 extremal: pins, antisymmetry and the far field at 0."""
        res = newton_service.solve_extremal(
            lattice_1d_p15,
            weights_1d_p15,
            PinSpec.canonical(lattice_1d_p15),
            tol=1e-9,
        )
        values = res.u.values

        assert res.final_grad_norm <= 1e-9
        assert values[8] == 1.0
        assert values[0] == -1.0
        assert values[4] == 0.0
        assert np.allclose(values, -values[::-1], atol=1e-7)
        assert np.all(np.diff(values) >= -1e-12)

    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_newton_matches_coordinate_descent(
        self,
        newton_service: ExtremalService,
        p: float,
    ) -> None:
        """Test the Newton extremal against an independent minimization."""
        lattice = build_lattice(FracParams(n=1, s=0.8, p=p), 1.0, 0.25)
        weights = build_weights(lattice)
        pins = PinSpec.canonical(lattice)
        res = newton_service.solve_extremal(lattice, weights, pins, tol=1e-9)

        fixed = np.zeros(lattice.node_count, dtype=bool)
        fixed[list(pins.nodes)] = True
        objective = PinnedEnergy(weights, fixed, res.u.values, pins.midpoint)
        start = initial_values(lattice, pins, InitialGuess.LINEAR)
        oracle = _coordinate_descent(objective, objective.split(start))

        assert np.allclose(objective.split(res.u.values), oracle, atol=1e-6)
        assert objective.value(objective.split(res.u.values)) <= (
            objective.value(oracle) + 1e-12
        )


class TestProperties:
    """Test class for the extremal property checks."""

    def test_symmetries(self, canonical_extremal: ExtremalResult) -> None:
        """Test the anti-symmetry of the canonical extremal on the line."""
        report = ExtremalService.verify_symmetries(canonical_extremal, tol=1e-10)

        assert report.passed
        assert report.axis_symmetry_defects == {}
        assert report.hyperplane_max <= 1e-9

    def test_planar_symmetries(self, newton_service: ExtremalService) -> None:
        """Test the axis symmetry and anti-symmetry in the plane."""
        lattice = build_lattice(FracParams(n=2, s=0.9, p=3.0), 1.0, 0.5)
        weights = build_weights(lattice)
        res = newton_service.solve_extremal(
            lattice, weights, PinSpec.canonical(lattice), tol=1e-10, max_iter=200
        )
        report = ExtremalService.verify_symmetries(res, tol=1e-8)

        assert report.passed
        assert set(report.axis_symmetry_defects) == {"reflect_axis_0"}

    def test_symmetries_need_canonical_pins(
        self,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
    ) -> None:
        """Test the precondition on the pins."""
        moved = ExtremalResult(
            canonical_extremal.u,
            PinSpec(11, 4),
            1.0,
            1.0,
            1.0,
            1,
            0.0,
        )

        with pytest.raises(PreconditionError):
            ExtremalService.verify_symmetries(moved)

    def test_pointwise_bounds(self, canonical_extremal: ExtremalResult) -> None:
        """Test that the extremal stays strictly between its pinned values."""
        report = ExtremalService.verify_pointwise_bounds(canonical_extremal)

        assert report.passed
        assert report.min_value == -1.0
        assert report.max_value == 1.0
        assert report.interior_nodes == 11
        assert report.strict_margin > 0

    def test_uniqueness(
        self,
        newton_service: ExtremalService,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that different starts reach the same extremal."""
        report = newton_service.verify_uniqueness(
            lattice_1d,
            weights_1d,
            PinSpec.canonical(lattice_1d),
            [InitialGuess.LINEAR, InitialGuess.ZERO, InitialGuess.RANDOM],
            rng=RandomStreams(0).generator("uniqueness"),
        )

        assert report.passed
        assert report.solutions == 3
        assert report.convexity_gap is not None
        assert report.convexity_gap > 0

    def test_uniqueness_needs_two_seeds(
        self,
        newton_service: ExtremalService,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test the seed count validation."""
        with pytest.raises(ValidationError):
            newton_service.verify_uniqueness(
                lattice_1d,
                weights_1d,
                PinSpec.canonical(lattice_1d),
                [InitialGuess.LINEAR],
            )

    def test_scaling_equivariance(
        self,
        newton_service: ExtremalService,
        canonical_extremal: ExtremalResult,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that the solver commutes with affine value maps."""
        report = newton_service.verify_scaling_equivariance(
            canonical_extremal, weights_1d, c=2.0, d=0.5
        )

        assert report.passed
        with pytest.raises(ValidationError):
            newton_service.verify_scaling_equivariance(
                canonical_extremal, weights_1d, c=0.0, d=0.5
            )

    def test_stability_by_value_map(
        self,
        newton_service: ExtremalService,
        canonical_extremal: ExtremalResult,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that a competitor peaked at the pins is matched without a solve."""
        u = canonical_extremal.u
        values = 2.0 * u.values + 1.0
        values[12] += 1.0
        values[4] -= 1.0
        v = u.with_values(values, 1.0)
        report = newton_service.verify_stability(
            canonical_extremal, v, weights_1d, allow_resolve=False
        )

        assert report.matching == "value_map"
        assert report.passed
        assert report.residual > 0

    def test_stability_by_resolve(
        self,
        newton_service: ExtremalService,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test random competitors, whose pair requires a new extremal."""
        rng = RandomStreams(3).generator("stability")
        for _ in range(3):
            v = random_grid_function(lattice_1d, rng)
            report = newton_service.verify_stability(canonical_extremal, v, weights_1d)
            assert report.passed
            assert report.exponent == 2.0

    def test_stability_unmappable_pair(
        self,
        newton_service: ExtremalService,
        canonical_extremal: ExtremalResult,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that a foreign pair fails when recomputation is disabled."""
        v = GridFunction.from_callable(lattice_1d, lambda x: x[:, 0])

        with pytest.raises(UnmappablePairError):
            newton_service.verify_stability(
                canonical_extremal, v, weights_1d, allow_resolve=False
            )
        with pytest.raises(DegenerateError):
            newton_service.verify_stability(
                canonical_extremal,
                GridFunction.constant(lattice_1d, 1.0),
                weights_1d,
            )

    def test_far_field_sensitivity(
        self,
        newton_service: ExtremalService,
        lattice_1d: Lattice,
        weights_1d: KernelWeights,
    ) -> None:
        """Test that symmetric pins make the free far field the midpoint."""
        report = newton_service.far_field_sensitivity(
            lattice_1d, weights_1d, PinSpec.canonical(lattice_1d)
        )

        assert report.fixed_far_field == 0.0
        assert report.free_far_field == pytest.approx(0.0, abs=1e-6)
        assert report.max_value_gap <= 1e-6
        assert report.free_c_star == pytest.approx(report.fixed_c_star, rel=1e-6)
