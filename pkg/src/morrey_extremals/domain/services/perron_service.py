import math
from collections.abc import Sequence

import numpy as np

from domain.contracts.dirichlet_solver import DirichletSolverContract
from domain.exceptions import (
    MismatchError,
    NonConvergenceError,
    PreconditionError,
    ValidationError,
)
from domain.services.grid import build_lattice
from domain.services.seminorm import build_weights
from domain.types.complement import ComplementData
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.reports import (
    BarrierBoundReport,
    ComparisonReport,
    DecayProfile,
    DecayReport,
    FarFieldSensitivityReport,
    HalfSpaceReport,
    SlitReport,
)
from domain.types.results import ExtremalResult
from domain.types.weights import KernelWeights

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 10_000
BARRIER_SLACK = 5e-2
# Largest decrease of the slit solution allowed along a ray leaving the tip.
RAY_SLACK = 1e-2
# Largest relative change of the decay profile between extents.
DRIFT_TOLERANCE = 0.5
SLIT_DIMENSION = 2
# Directions leaving the slit tip away from the slit.
SLIT_RAYS = ((-1, 0), (0, 1), (0, -1), (-1, 1), (-1, -1), (1, 1), (1, -1))


def slit_data(lattice: Lattice, radius: float = 1.0) -> ComplementData:
    """Complement data of the unit ball minus the slit {x2 = 0, x1 >= 0}.

    The data is 1 outside the ball and in the far field, 0 on the slit.
    """
    centered = lattice.centered_indices
    on_slit = (centered[:, 1] == 0) & (centered[:, 0] >= 0)
    inside = lattice.radii < radius * (1 - 1e-12)
    free = inside & ~on_slit
    g = np.where(on_slit & inside, 0.0, 1.0)
    return ComplementData(domain_mask=free, g=g, far_field=1.0)


class PerronService:
    """Solves discrete Dirichlet problems and runs the boundary-behavior experiments."""

    def __init__(self, solver: DirichletSolverContract) -> None:
        """Initialize the service.

        Args:
            solver (DirichletSolverContract): Dirichlet solver.
        """
        self.solver = solver

    def solve_dirichlet(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        data: ComplementData,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        initial: np.ndarray | None = None,
    ) -> GridFunction:
        """Discrete Perron solution: harmonic on the free nodes, data elsewhere.

        Raises:
            MismatchError: If the data or weights do not fit the lattice.
            ValidationError: If tol or max_iter are invalid.
            NonConvergenceError: If the budget runs out.
        """
        if not lattice.is_compatible(weights.lattice):
            raise MismatchError("Weights belong to another lattice")
        if data.domain_mask.shape != (lattice.node_count,):
            raise MismatchError("Complement data does not match the lattice")
        if not tol > 0 or max_iter < 1:
            raise ValidationError("Tolerance and iteration budget must be positive")
        outcome = self.solver.solve(weights, data, tol, max_iter, initial)
        if not outcome.converged:
            raise NonConvergenceError(outcome.iterations, outcome.grad_norm)
        return GridFunction(lattice, outcome.values, data.far_field)

    def verify_comparison(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        low: ComplementData,
        high: ComplementData,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
    ) -> ComparisonReport:
        """Checks that ordered data produce ordered solutions.

        Raises:
            PreconditionError: If the domains differ or the data are not ordered.
        """
        if not np.array_equal(low.domain_mask, high.domain_mask):
            raise PreconditionError("Compared data must share the domain")
        constrained = ~low.domain_mask
        if np.any(low.g[constrained] > high.g[constrained]) or (
            low.far_field > high.far_field
        ):
            raise PreconditionError("Compared data must be ordered")
        lower = self.solve_dirichlet(lattice, weights, low, tol, max_iter)
        upper = self.solve_dirichlet(lattice, weights, high, tol, max_iter)
        violation = float(np.max(lower.values - upper.values))
        tolerance = 10 * tol
        return ComparisonReport(
            max_violation=violation,
            tolerance=tolerance,
            passed=violation <= tolerance,
        )

    def verify_barrier_bound(
        self,
        lattice: Lattice,
        weights: KernelWeights,
        data: ComplementData,
        x0: Sequence[float],
        r0: float,
        r1: float,
        M: float,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        solution: GridFunction | None = None,
    ) -> BarrierBoundReport:
        """Compares a Dirichlet solution with the barrier bound near a boundary point.

        For each free node y the bound is M (r0 - r1)^-beta min_x |x - y|^beta,
        the minimum running over constrained nodes x in B(x0, r1) having a free
        lattice neighbor.

        Args:
            lattice (Lattice): The lattice.
            weights (KernelWeights): Weights of the lattice.
            data (ComplementData): Data vanishing on B(x0, r0) and bounded by M.
            x0 (Sequence[float]): Boundary point.
            r0 (float): Radius on which the data vanish.
            r1 (float): Inner radius, 0 < r1 < r0.
            M (float): Bound on |g|.
            tol (float): Solver tolerance.
            max_iter (int): Solver budget.
            solution (GridFunction | None): Precomputed solution for data.

        Returns:
            BarrierBoundReport: Worst ratio of |u| to the bound.

        Raises:
            PreconditionError: If the radii or the data violate the hypotheses.
        """
        if not 0 < r1 < r0:
            raise PreconditionError(f"Radii must satisfy 0 < r1 < r0, got {r1}, {r0}")
        constrained = ~data.domain_mask
        coordinates = lattice.coordinates
        distance = np.linalg.norm(coordinates - np.asarray(x0, dtype=float), axis=1)
        if np.any(np.abs(data.g[constrained & (distance < r0)]) > 0):
            raise PreconditionError(
                "Data must vanish on the constrained nodes of B(x0, r0)"
            )
        if np.any(np.abs(data.g[constrained]) > M) or abs(data.far_field) > M:
            raise PreconditionError(f"Data must be bounded by M = {M}")

        u = (
            self.solve_dirichlet(lattice, weights, data, tol, max_iter)
            if solution is None
            else solution
        )
        beta = lattice.params.barrier_exponent
        bound_constant = M / (r0 - r1) ** beta
        boundary = np.flatnonzero(
            constrained
            & (distance < r1)
            & _has_free_neighbor(lattice, data.domain_mask)
        )
        free = data.free_nodes
        if boundary.size == 0:
            return BarrierBoundReport(beta, bound_constant, 0.0, None, 0, passed=True)
        gaps = np.min(
            np.linalg.norm(
                coordinates[free, None, :] - coordinates[None, boundary, :], axis=-1
            ),
            axis=1,
        )
        ratios = np.abs(u.values[free]) / (bound_constant * gaps**beta)
        worst = int(np.argmax(ratios))
        worst_ratio = float(ratios[worst])
        return BarrierBoundReport(
            beta=beta,
            bound_constant=bound_constant,
            worst_ratio=worst_ratio,
            worst_node=int(free[worst]),
            boundary_nodes=int(boundary.size),
            passed=worst_ratio <= 1 + BARRIER_SLACK,
        )

    def run_slit_experiment(
        self,
        params: FracParams,
        resolution: tuple[float, float],
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
        weights: KernelWeights | None = None,
        refinements: int = 1,
    ) -> tuple[SlitReport, GridFunction, ComplementData]:
        """Solves the slit problem and measures the solution near the slit tip.

        The rings rho in {4h, 8h, ..., 1} are measured on the (L, h) lattice.
        The problem is then solved again on lattices of spacing h/2, h/4, ...
        and the maximum over the innermost ring rho = 4h of each level must
        shrink as rho and h shrink together.

        Args:
            params (FracParams): Parameters with n = 2.
            resolution (tuple[float, float]): (L, h) of the lattice.
            tol (float): Solver tolerance.
            max_iter (int): Solver budget.
            weights (KernelWeights | None): Prebuilt weights of the lattice;
                refined levels reuse their rules.
            refinements (int): Number of halvings of h.

        Returns:
            tuple[SlitReport, GridFunction, ComplementData]: The report, the
            solution and the slit data of the (L, h) lattice.

        Raises:
            ValidationError: If n != 2 or refinements is negative.
            NonConvergenceError: If a solve runs out of budget.
        """
        if params.n != SLIT_DIMENSION:
            raise ValidationError("The slit experiment is two-dimensional")
        if refinements < 0:
            raise ValidationError(f"refinements must be >= 0, got {refinements}")
        extent, spacing = resolution
        lattice = build_lattice(params, extent, spacing)
        if weights is None:
            weights = build_weights(lattice)
        data = slit_data(lattice)
        upper = self.solve_dirichlet(lattice, weights, data, tol, max_iter)
        lower = self.solve_dirichlet(lattice, weights, data.negated(), tol, max_iter)

        rings = []
        rho = 4 * spacing
        while rho <= 1.0 + 1e-12:
            peak = _ring_max(lattice, data, upper, rho)
            if peak is not None:
                rings.append((rho, peak))
            rho *= 2
        increasing = len(rings) >= 2 and all(  # noqa: PLR2004
            inner < outer
            for (_, inner), (_, outer) in zip(rings, rings[1:], strict=False)
        )

        tip = [(spacing, rings[0][1])] if rings else []
        for level in range(1, refinements + 1):
            fine = build_lattice(params, extent, spacing / 2**level)
            fine_weights = build_weights(fine, weights.exterior_rule, weights.near_rule)
            fine_data = slit_data(fine)
            solution = self.solve_dirichlet(
                fine, fine_weights, fine_data, tol, max_iter
            )
            peak = _ring_max(fine, fine_data, solution, 4 * fine.spacing)
            if peak is not None:
                tip.append((fine.spacing, peak))
        shrinking = all(
            later < earlier
            for (_, earlier), (_, later) in zip(tip, tip[1:], strict=False)
        )

        negation = float(np.max(np.abs(upper.values + lower.values)))
        slit_nodes = ~data.domain_mask & (lattice.radii < 1.0)
        slit_max = float(np.max(np.abs(upper.values[slit_nodes])))
        ray_defect = _ray_monotonicity_defect(lattice, upper)
        report = SlitReport(
            rings=tuple(rings),
            increasing=increasing,
            tip_rings=tuple(tip),
            tip_shrinking=shrinking,
            negation_defect=negation,
            slit_max_abs=slit_max,
            ray_monotonicity_defect=ray_defect,
            passed=(
                increasing
                and shrinking
                and negation <= 10 * tol
                and slit_max == 0.0
                and ray_defect <= RAY_SLACK
            ),
        )
        return report, upper, data

    @staticmethod
    def run_decay_experiment(
        results: ExtremalResult | Sequence[ExtremalResult],
        radii: Sequence[float] | None = None,
        sensitivity: FarFieldSensitivityReport | None = None,
        drift_tolerance: float = DRIFT_TOLERANCE,
    ) -> DecayReport:
        """Deviation of extremals from (a+b)/2 outside growing balls.

        The drift compares consecutive extents at the common radii up to half
        the smallest extent, relative to the larger of the two deviations.

        Args:
            results (ExtremalResult | Sequence[ExtremalResult]): Extremals with
                the same pins on lattices of increasing extent.
            radii (Sequence[float] | None): Radii r; defaults to L/4, L/2, L of
                the smallest extent.
            sensitivity (FarFieldSensitivityReport | None): Attached comparison
                with a free far field.
            drift_tolerance (float): Largest relative drift that passes.

        Returns:
            DecayReport: One profile per extremal.
        """
        extremals = [results] if isinstance(results, ExtremalResult) else list(results)
        if not extremals:
            raise ValidationError("The decay experiment needs at least one extremal")
        smallest = min(res.u.lattice.half_extent for res in extremals)
        chosen = (
            list(radii)
            if radii is not None
            else [smallest / 4, smallest / 2, smallest]
        )
        profiles = []
        for res in extremals:
            lattice = res.u.lattice
            deviation = np.abs(res.u.values - res.pins.midpoint)
            rows = []
            for r in chosen:
                outside = lattice.radii >= r * (1 - 1e-12)
                rows.append((float(r), float(deviation[outside].max(initial=0.0))))
            decreasing = all(
                later < earlier
                for (_, earlier), (_, later) in zip(rows, rows[1:], strict=False)
            )
            profiles.append(DecayProfile(lattice.half_extent, tuple(rows), decreasing))
        drift = max(
            (
                abs(a - b) / max(a, b)
                for first, second in zip(profiles, profiles[1:], strict=False)
                for (r, a), (_, b) in zip(first.rows, second.rows, strict=True)
                if r <= smallest / 2 * (1 + 1e-12) and max(a, b) > 0
            ),
            default=0.0,
        )
        return DecayReport(
            profiles=tuple(profiles),
            extent_drift=drift,
            drift_tolerance=drift_tolerance,
            sensitivity=sensitivity,
            passed=(
                all(profile.decreasing for profile in profiles)
                and drift <= drift_tolerance
            ),
        )

    @staticmethod
    def verify_half_space_sign(
        res: ExtremalResult,
        tol: float = DEFAULT_TOLERANCE,
    ) -> HalfSpaceReport:
        """Checks that u - (a+b)/2 takes the sign of the bisecting hyperplane side."""
        lattice = res.u.lattice
        pins = res.pins
        coordinates = lattice.coordinates
        axis = coordinates[pins.x0] - coordinates[pins.y0]
        middle = (coordinates[pins.x0] + coordinates[pins.y0]) / 2
        side = (coordinates - middle) @ axis
        off_plane = np.abs(side) > 1e-9 * lattice.spacing * float(np.linalg.norm(axis))
        orientation = math.copysign(1.0, pins.a - pins.b)
        signed = orientation * np.sign(side[off_plane]) * (
            res.u.values[off_plane] - pins.midpoint
        )
        minimum = float(signed.min()) if signed.size else math.inf
        tolerance = 10 * tol
        return HalfSpaceReport(
            min_signed_deviation=minimum,
            off_hyperplane_nodes=int(signed.size),
            tolerance=tolerance,
            passed=minimum > -tolerance,
        )


def _has_free_neighbor(lattice: Lattice, free: np.ndarray) -> np.ndarray:
    """Whether each node has a free node among its 2n axis neighbors."""
    grid = free.reshape(lattice.shape)
    result = np.zeros(lattice.shape, dtype=bool)
    for axis in range(lattice.n):
        forward = [slice(None)] * lattice.n
        backward = [slice(None)] * lattice.n
        forward[axis] = slice(1, None)
        backward[axis] = slice(None, -1)
        result[tuple(backward)] |= grid[tuple(forward)]
        result[tuple(forward)] |= grid[tuple(backward)]
    return result.reshape(-1)


def _ray_monotonicity_defect(lattice: Lattice, u: GridFunction) -> float:
    """Largest decrease of u between consecutive nodes along rays from the origin."""
    defect = 0.0
    center = lattice.center_index
    for direction in SLIT_RAYS:
        previous = None
        for step in range(center + 1):
            multi = (center + step * direction[0], center + step * direction[1])
            if not all(0 <= k < lattice.nodes_per_axis for k in multi):
                break
            if lattice.radii[lattice.flat_index(multi)] > 1.0 + 1e-12:
                break
            value = float(u.values[lattice.flat_index(multi)])
            if previous is not None:
                defect = max(defect, previous - value)
            previous = value
    return defect


def _ring_max(
    lattice: Lattice,
    data: ComplementData,
    u: GridFunction,
    rho: float,
) -> float | None:
    """Max of u over the free nodes with rho/2 < |x| <= rho, None if there are none."""
    radii = lattice.radii
    annulus = data.domain_mask & (radii > rho / 2) & (radii <= rho + 1e-12)
    if not annulus.any():
        return None
    return float(u.values[annulus].max())
