import itertools
import math
from collections.abc import Sequence

import numpy as np

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
from domain.services.grid import apply_transform
from domain.services.seminorm import (
    gagliardo_energy,
    gagliardo_seminorm,
    holder_seminorm,
    pair_quotient,
)
from domain.types.enums import FarFieldMode, InitialGuess
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.pins import PinSpec
from domain.types.reports import (
    FarFieldSensitivityReport,
    PointwiseBoundsReport,
    ScalingReport,
    StabilityReport,
    SymmetryReport,
    UniquenessReport,
)
from domain.types.results import ExtremalResult
from domain.types.transforms import RigidTransform
from domain.types.weights import KernelWeights

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 100_000
# Relative slack of the stability inequality.
STABILITY_SLACK = 1e-8

type Seed = InitialGuess | np.ndarray


def initial_values(
    lattice: Lattice,
    pins: PinSpec,
    seed: Seed,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Initial node values honoring the pins.

    ZERO starts every free node at (a+b)/2, LINEAR interpolates between the
    pins along their axis and is constant beyond them, RANDOM draws uniform
    values between a and b.

    Raises:
        ValidationError: If RANDOM is requested without a generator or an
            explicit array has the wrong shape.
    """
    count = lattice.node_count
    if isinstance(seed, np.ndarray):
        if seed.shape != (count,):
            raise ValidationError(f"Initial values must have {count} entries")
        values = seed.astype(float, copy=True)
    elif seed is InitialGuess.ZERO:
        values = np.full(count, pins.midpoint)
    elif seed is InitialGuess.LINEAR:
        coordinates = lattice.coordinates
        axis = coordinates[pins.x0] - coordinates[pins.y0]
        position = (coordinates - coordinates[pins.y0]) @ axis / float(axis @ axis)
        values = pins.b + (pins.a - pins.b) * np.clip(position, 0.0, 1.0)
    else:
        if rng is None:
            raise ValidationError("Random initial values need a generator")
        low, high = sorted((pins.a, pins.b))
        values = rng.uniform(low, high, size=count)
    values[pins.x0] = pins.a
    values[pins.y0] = pins.b
    return values


class ExtremalService:
    """Computes discrete Morrey extremals and checks their properties."""

    def __init__(self, minimizer: MinimizerContract) -> None:
        """Initialize the service.

        Args:
            minimizer (MinimizerContract): Minimizer of the pinned energy.
        """
        self.minimizer = minimizer

    def solve_extremal(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        pins: PinSpec,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        *,
        initial: Seed = InitialGuess.LINEAR,
        far_field_mode: FarFieldMode = FarFieldMode.FIXED,
        rng: np.random.Generator | None = None,
    ) -> ExtremalResult:
        """Minimizes the p-energy among functions with the pinned values.

        The pinned values are substituted, not penalized. The far field is
        fixed at (a+b)/2 unless far_field_mode is FREE, in which case it is
        optimized too.

        Args:
            lattice (Lattice): The lattice.
            weights (KernelWeights): Weights of the lattice.
            pins (PinSpec): Pinned nodes and values.
            tol (float): Target max-norm of the projected gradient.
            max_iter (int): Iteration budget.
            initial (Seed): Initial guess kind or explicit node values.
            far_field_mode (FarFieldMode): Fixed or optimized far field.
            rng (np.random.Generator | None): Generator for RANDOM guesses.

        Returns:
            ExtremalResult: The extremal and its seminorms.

        Raises:
            ValidationError: If tol or max_iter are invalid.
            GeometryError: If a pin is not a node of the lattice.
            MismatchError: If the weights belong to another lattice.
            NonConvergenceError: If the budget runs out.
        """
        if not tol > 0:
            raise ValidationError(f"Tolerance must be positive, got {tol}")
        if max_iter < 1:
            raise ValidationError(f"Iteration budget must be positive, got {max_iter}")
        if not lattice.is_compatible(weights.lattice):
            raise MismatchError("Weights belong to another lattice")
        if any(not 0 <= node < lattice.node_count for node in pins.nodes):
            raise GeometryError(f"Pins {pins.nodes} are not nodes of the lattice")

        values = initial_values(lattice, pins, initial, rng)
        fixed = np.zeros(lattice.node_count, dtype=bool)
        fixed[list(pins.nodes)] = True
        objective = PinnedEnergy(
            weights,
            fixed,
            values,
            pins.midpoint,
            far_field_free=far_field_mode is FarFieldMode.FREE,
        )
        outcome = self.minimizer.minimize(
            objective, objective.split(values), tol, max_iter
        )
        if not outcome.converged:
            raise NonConvergenceError(outcome.iterations, outcome.grad_norm)

        u = objective.to_grid_function(outcome.x)
        gagliardo = gagliardo_seminorm(u, weights)
        holder, argpair = holder_seminorm(u)
        return ExtremalResult(
            u=u,
            pins=pins,
            gagliardo=gagliardo,
            holder=holder,
            c_star_hat=holder / gagliardo,
            iterations=outcome.iterations,
            final_grad_norm=outcome.grad_norm,
            holder_argpair=argpair,
            far_field_mode=far_field_mode,
            energy_history=outcome.energy_history,
        )

    @staticmethod
    def estimate_sharp_constant(res: ExtremalResult) -> float:
        """Lattice sharp constant holder / gagliardo of an extremal.

        Raises:
            DegenerateError: If the Gagliardo seminorm vanishes.
        """
        if res.gagliardo == 0:
            raise DegenerateError(
                "The sharp constant is undefined for a constant function"
            )
        return res.holder / res.gagliardo

    def verify_uniqueness(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        pins: PinSpec,
        seeds: Sequence[Seed],
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        rng: np.random.Generator | None = None,
    ) -> UniquenessReport:
        """Solves from several initial guesses and compares the extremals.

        The first two initial guesses, when distinct, also witness strict
        convexity of the energy at their midpoint.

        Raises:
            ValidationError: If fewer than two seeds are given.
            NonConvergenceError: If a solve runs out of budget.
        """
        if len(seeds) < 2:  # noqa: PLR2004
            raise ValidationError("Uniqueness needs at least two seeds")
        starts = [initial_values(lattice, pins, seed, rng) for seed in seeds]
        solutions = [
            self.solve_extremal(
                lattice, weights, pins, tol, max_iter, initial=start
            ).u.values
            for start in starts
        ]
        gap = max(
            float(np.max(np.abs(first - second)))
            for first, second in itertools.combinations(solutions, 2)
        )
        convexity_gap = None
        if not np.array_equal(starts[0], starts[1]):
            first = GridFunction(lattice, starts[0], pins.midpoint)
            second = GridFunction(lattice, starts[1], pins.midpoint)
            middle = GridFunction(lattice, (starts[0] + starts[1]) / 2, pins.midpoint)
            convexity_gap = (
                gagliardo_energy(first, weights) + gagliardo_energy(second, weights)
            ) / 2 - gagliardo_energy(middle, weights)
        tolerance = 10 * tol
        return UniquenessReport(
            gap=gap,
            tolerance=tolerance,
            solutions=len(solutions),
            convexity_gap=convexity_gap,
            passed=gap <= tolerance and (convexity_gap is None or convexity_gap > 0),
        )

    @staticmethod
    def verify_symmetries(
        res: ExtremalResult,
        tol: float = DEFAULT_TOLERANCE,
    ) -> SymmetryReport:
        """Measures the symmetry and anti-symmetry defects of a canonical extremal.

        Raises:
            PreconditionError: If the pins are not canonical.
        """
        u = res.u
        lattice = u.lattice
        if not res.pins.is_canonical(lattice):
            raise PreconditionError(
                "Symmetry checks need the canonical pins (+-e_n, +-1)"
            )
        last = lattice.n - 1
        axis_fixing = {
            f"reflect_axis_{axis}": RigidTransform.reflect_axis(axis)
            for axis in range(last)
        }
        defects = {
            name: float(np.max(np.abs(u.values - apply_transform(u, transform).values)))
            for name, transform in axis_fixing.items()
        }
        mirrored = apply_transform(u, RigidTransform.reflect_axis(last))
        anti_symmetry = float(np.max(np.abs(u.values + mirrored.values)))
        on_plane = lattice.centered_indices[:, last] == 0
        hyperplane = float(np.max(np.abs(u.values[on_plane])))
        tolerance = 10 * tol
        return SymmetryReport(
            axis_symmetry_defects=defects,
            anti_symmetry_defect=anti_symmetry,
            hyperplane_max=hyperplane,
            tolerance=tolerance,
            passed=max([anti_symmetry, hyperplane, *defects.values()]) <= tolerance,
        )

    @staticmethod
    def verify_pointwise_bounds(
        res: ExtremalResult,
        tol: float = DEFAULT_TOLERANCE,
    ) -> PointwiseBoundsReport:
        """Checks that the extremal stays strictly between its pinned values."""
        u = res.u
        lattice = u.lattice
        pins = res.pins
        low, high = sorted((pins.a, pins.b))
        tolerance = 10 * tol
        coordinates = lattice.coordinates
        distances = np.minimum(
            np.linalg.norm(coordinates - coordinates[pins.x0], axis=1),
            np.linalg.norm(coordinates - coordinates[pins.y0], axis=1),
        )
        interior = distances >= 2 * lattice.spacing * (1 - 1e-9)
        interior[list(pins.nodes)] = False
        local = u.values[interior]
        margin = (
            float(np.min(np.minimum(local - low, high - local)))
            if local.size
            else math.inf
        )
        min_value = float(u.values.min())
        max_value = float(u.values.max())
        return PointwiseBoundsReport(
            min_value=min_value,
            max_value=max_value,
            strict_margin=margin,
            interior_nodes=int(local.size),
            tolerance=tolerance,
            passed=(
                min_value >= low - tolerance
                and max_value <= high + tolerance
                and margin > tolerance
            ),
        )

    def verify_stability(
        self,
        res: ExtremalResult,
        v: GridFunction,
        weights: KernelWeights,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        *,
        allow_resolve: bool = True,
    ) -> StabilityReport:
        """Checks the stability inequality of an extremal against a competitor v.

        The extremal is matched to the pair (i, j) attaining v's Hölder seminorm.
        When that pair is the pinned pair of res and res minimizes over the far
        field as well, res is mapped by the affine value map sending its pinned
        values to v_i, v_j. Otherwise the extremal is recomputed with pins at
        (i, j) and a free far field. With C the pair quotient of the matched
        extremal u over its seminorm, the checked inequality is
        (C/2)^e [u - v]^e + [v]_C^e <= C^e [v]^e, e = p for p >= 2 and
        e = p/(p - 1) otherwise.

        Raises:
            MismatchError: If the inputs live on different lattices.
            DegenerateError: If v is constant.
            UnmappablePairError: If v's pair is not the pinned pair and
                recomputation is disabled.
            NonConvergenceError: If a recomputation runs out of budget.
        """
        lattice = weights.lattice
        if not (
            v.lattice.is_compatible(lattice)
            and res.u.lattice.is_compatible(lattice)
        ):
            raise MismatchError("Extremal, competitor and weights must share a lattice")
        v_holder, (i, j) = holder_seminorm(v)
        if v_holder == 0:
            raise DegenerateError("Stability needs a non-constant competitor")
        high, low = (i, j) if v.values[i] >= v.values[j] else (j, i)
        top, bottom = float(v.values[high]), float(v.values[low])

        pins = res.pins
        minimizes_far_field = (
            res.far_field_mode is FarFieldMode.FREE or pins.is_canonical(lattice)
        )
        if {high, low} == set(pins.nodes) and minimizes_far_field:
            pinned_top = pins.a if high == pins.x0 else pins.b
            pinned_bottom = pins.b if high == pins.x0 else pins.a
            c = (top - bottom) / (pinned_top - pinned_bottom)
            d = top - c * pinned_top
            u = res.u.with_values(c * res.u.values + d, c * res.u.far_field + d)
            matching = "value_map"
        elif allow_resolve:
            u = self.solve_extremal(
                lattice,
                weights,
                PinSpec(high, low, top, bottom),
                tol,
                max_iter,
                far_field_mode=FarFieldMode.FREE,
            ).u
            matching = "resolve"
        else:
            raise UnmappablePairError(
                f"Hölder pair {(high, low)} of the competitor is not the pinned pair "
                f"{pins.nodes}"
            )

        params = lattice.params
        exponent = params.p if params.p >= 2 else params.conjugate  # noqa: PLR2004
        constant = pair_quotient(u, (high, low)) / gagliardo_seminorm(u, weights)
        difference = u.with_values(u.values - v.values, u.far_field - v.far_field)
        lhs = (constant / 2) ** exponent * gagliardo_seminorm(
            difference, weights
        ) ** exponent + v_holder**exponent
        rhs = constant**exponent * gagliardo_seminorm(v, weights) ** exponent
        residual = rhs - lhs
        return StabilityReport(
            exponent=exponent,
            constant=constant,
            lhs=lhs,
            rhs=rhs,
            residual=residual,
            matching=matching,
            passed=residual >= -STABILITY_SLACK * max(1.0, rhs),
        )

    def verify_scaling_equivariance(
        self,
        res: ExtremalResult,
        weights: KernelWeights,
        c: float,
        d: float,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
    ) -> ScalingReport:
        """Compares c*u + d with the extremal for the pins (c a + d, c b + d).

        Raises:
            ValidationError: If c is zero.
            NonConvergenceError: If the solve runs out of budget.
        """
        if c == 0:
            raise ValidationError("The value map needs a nonzero multiplier")
        pins = res.pins
        mapped = PinSpec(pins.x0, pins.y0, c * pins.a + d, c * pins.b + d)
        solved = self.solve_extremal(
            weights.lattice,
            weights,
            mapped,
            tol,
            max_iter,
            far_field_mode=res.far_field_mode,
        )
        gap = float(np.max(np.abs(solved.u.values - (c * res.u.values + d))))
        return ScalingReport(
            c=c, d=d, gap=gap, passed=gap <= 10 * tol * max(1.0, abs(c))
        )

    def far_field_sensitivity(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        pins: PinSpec,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
    ) -> FarFieldSensitivityReport:
        """Re-solves with the far field free and compares with the fixed far field.

        Raises:
            NonConvergenceError: If a solve runs out of budget.
        """
        fixed = self.solve_extremal(lattice, weights, pins, tol, max_iter)
        free = self.solve_extremal(
            lattice, weights, pins, tol, max_iter, far_field_mode=FarFieldMode.FREE
        )
        return FarFieldSensitivityReport(
            fixed_far_field=fixed.u.far_field,
            free_far_field=free.u.far_field,
            fixed_c_star=fixed.c_star_hat,
            free_c_star=free.c_star_hat,
            max_value_gap=float(np.max(np.abs(fixed.u.values - free.u.values))),
        )

