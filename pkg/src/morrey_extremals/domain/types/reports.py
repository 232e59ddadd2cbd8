"""Reports returned by the verification services."""

from dataclasses import dataclass


@dataclass(frozen=True)
class MorreyReport:
    """Hölder over Gagliardo ratio of one function.

    Attributes:
        holder (float): Discrete Hölder seminorm.
        gagliardo (float): Discrete Gagliardo seminorm.
        ratio (float): holder / gagliardo.
        argpair (tuple[int, int]): Pair attaining the Hölder seminorm.
        regional_constant (float): Pair difference quotient divided by the
            seminorm localized to the ball spanned by the argpair.
        fitted (bool): Marks regional_constant as an empirical fit.
        bound (float | None): Sharp constant the ratio was checked against.
        within_bound (bool | None): ratio <= bound * (1 + allowance), if checked.
    """

    holder: float
    gagliardo: float
    ratio: float
    argpair: tuple[int, int]
    regional_constant: float
    fitted: bool = True
    bound: float | None = None
    within_bound: bool | None = None


@dataclass(frozen=True)
class ClarksonReport:
    """Slack of the Clarkson inequality matching p.

    Attributes:
        exponent (float): p when p >= 2, p/(p - 1) otherwise.
        lhs (float): Left-hand side.
        rhs (float): Right-hand side.
        slack (float): rhs - lhs.
        relative_slack (float): slack / rhs, 0 when rhs = 0.
    """

    exponent: float
    lhs: float
    rhs: float
    slack: float
    relative_slack: float


@dataclass(frozen=True)
class UniquenessReport:
    """Agreement of extremals computed from different initial guesses.

    Attributes:
        gap (float): Largest pairwise max-norm distance between solutions.
        tolerance (float): Allowed gap, 10 * tol.
        solutions (int): Number of solves.
        convexity_gap (float | None): (E(u1) + E(u2))/2 - E((u1 + u2)/2) for
            the first two distinct initial guesses, None if they coincide.
        passed (bool): gap <= tolerance and convexity_gap > 0 when defined.
    """

    gap: float
    tolerance: float
    solutions: int
    convexity_gap: float | None
    passed: bool


@dataclass(frozen=True)
class SymmetryReport:
    """Symmetry defects of a canonical extremal.

    Attributes:
        axis_symmetry_defects (dict[str, float]): max |u - u o R| per lattice
            symmetry R fixing the e_n axis; empty in one dimension.
        anti_symmetry_defect (float): max |u(x', x_n) + u(x', -x_n)|.
        hyperplane_max (float): max |u| on the hyperplane x_n = 0.
        tolerance (float): Allowed defect, 10 * tol.
        passed (bool): Every defect within tolerance.
    """

    axis_symmetry_defects: dict[str, float]
    anti_symmetry_defect: float
    hyperplane_max: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class PointwiseBoundsReport:
    """Position of an extremal between its pinned values.

    Attributes:
        min_value (float): Smallest node value.
        max_value (float): Largest node value.
        strict_margin (float): Smallest distance to the pinned values over
            non-pinned nodes at distance >= 2h from both pins.
        interior_nodes (int): Number of nodes entering strict_margin.
        tolerance (float): 10 * tol.
        passed (bool): Bounds hold within tolerance and strict_margin > tolerance.
    """

    min_value: float
    max_value: float
    strict_margin: float
    interior_nodes: int
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class StabilityReport:
    """Stability inequality for one competitor.

    Attributes:
        exponent (float): p when p >= 2, p/(p - 1) otherwise.
        constant (float): Sharp constant used, from the extremal matched to
            the competitor's Hölder pair.
        lhs (float): (C/2)^e [u - v]^e + [v]_C^e.
        rhs (float): C^e [v]^e.
        residual (float): rhs - lhs.
        matching (str): "value_map" when the extremal was remapped by an
            affine value map, "resolve" when it was recomputed at the pair.
        passed (bool): residual >= -1e-8 (relative to rhs).
    """

    exponent: float
    constant: float
    lhs: float
    rhs: float
    residual: float
    matching: str
    passed: bool


@dataclass(frozen=True)
class ScalingReport:
    """Value-map equivariance of the extremal solver.

    Attributes:
        c (float): Multiplier.
        d (float): Offset.
        gap (float): max |solve(c a + d, c b + d) - (c u + d)|.
        passed (bool): gap <= 10 * tol.
    """

    c: float
    d: float
    gap: float
    passed: bool


@dataclass(frozen=True)
class FarFieldSensitivityReport:
    """Effect of optimizing the far-field value instead of fixing it.

    Attributes:
        fixed_far_field (float): (a + b)/2.
        free_far_field (float): Optimal far-field value.
        fixed_c_star (float): Sharp constant with the far field fixed.
        free_c_star (float): Sharp constant with the far field free.
        max_value_gap (float): Max-norm distance between both extremals.
    """

    fixed_far_field: float
    free_far_field: float
    fixed_c_star: float
    free_c_star: float
    max_value_gap: float


@dataclass(frozen=True)
class BarrierRefinementReport:
    """Barrier residuals on a coarse and a refined lattice.

    Attributes:
        coarse (tuple[float, float]): (h, L) of the coarse lattice.
        fine (tuple[float, float]): (h, L) of the refined lattice.
        coarse_max_abs (float): Max-abs operator residual on the coarse lattice.
        fine_max_abs (float): Max-abs operator residual on the refined lattice.
        coarse_max_relative (float): Max relative imbalance, coarse.
        fine_max_relative (float): Max relative imbalance, refined.
        reduction (float): coarse_max_abs / fine_max_abs.
        passed (bool): reduction >= 1.5.
    """

    coarse: tuple[float, float]
    fine: tuple[float, float]
    coarse_max_abs: float
    fine_max_abs: float
    coarse_max_relative: float
    fine_max_relative: float
    reduction: float
    passed: bool


@dataclass(frozen=True)
class BarrierBoundReport:
    """Worst ratio of a Dirichlet solution to the barrier bound.

    Attributes:
        beta (float): Barrier exponent (sp - n)/(p - 1).
        bound_constant (float): M / (r0 - r1)^beta.
        worst_ratio (float): Largest |u(y)| / (bound_constant * dist(y)^beta).
        worst_node (int | None): Free node attaining worst_ratio.
        boundary_nodes (int): Constrained nodes of B(x0, r1) next to the domain.
        passed (bool): worst_ratio <= 1 + slack.
    """

    beta: float
    bound_constant: float
    worst_ratio: float
    worst_node: int | None
    boundary_nodes: int
    passed: bool


@dataclass(frozen=True)
class SlitReport:
    """Boundary behavior of the discrete Perron solution at the slit tip.

    Attributes:
        rings (tuple[tuple[float, float], ...]): (rho, max of u over free nodes
            with rho/2 < |x| <= rho).
        increasing (bool): Ring maxima strictly increase with rho.
        tip_rings (tuple[tuple[float, float], ...]): (h, max of u over the ring
            rho = 4h) for h, h/2, ...
        tip_shrinking (bool): The tip ring maxima strictly decrease with h.
        negation_defect (float): max |solution(-U) + solution(U)|.
        slit_max_abs (float): max |u| on the slit nodes.
        ray_monotonicity_defect (float): Largest decrease of u along the rays
            leaving the origin away from the slit.
        passed (bool): Both ring sequences monotone, negation symmetric, zero
            on the slit and rays monotone up to 1e-2.
    """

    rings: tuple[tuple[float, float], ...]
    increasing: bool
    tip_rings: tuple[tuple[float, float], ...]
    tip_shrinking: bool
    negation_defect: float
    slit_max_abs: float
    ray_monotonicity_defect: float
    passed: bool


@dataclass(frozen=True)
class DecayProfile:
    """Deviation from the limit at infinity of one extremal.

    Attributes:
        half_extent (float): L of the extremal's lattice.
        rows (tuple[tuple[float, float], ...]): (r, max |u - (a+b)/2| over
            nodes with |x| >= r).
        decreasing (bool): Deviation strictly decreasing in r.
    """

    half_extent: float
    rows: tuple[tuple[float, float], ...]
    decreasing: bool


@dataclass(frozen=True)
class DecayReport:
    """Limit at infinity across truncation extents.

    Attributes:
        profiles (tuple[DecayProfile, ...]): One profile per extremal.
        extent_drift (float): Largest relative change of the deviation at a
            common radius up to half the smallest extent between consecutive
            extents, 0 for a single extent.
        drift_tolerance (float): Largest drift that passes.
        sensitivity (FarFieldSensitivityReport | None): Attached free far-field
            comparison, when computed.
        passed (bool): Every profile is decreasing and the drift is within
            tolerance.
    """

    profiles: tuple[DecayProfile, ...]
    extent_drift: float
    drift_tolerance: float
    sensitivity: FarFieldSensitivityReport | None
    passed: bool


@dataclass(frozen=True)
class HalfSpaceReport:
    """Sign of an extremal on both sides of the bisecting hyperplane.

    Attributes:
        min_signed_deviation (float): Minimum over off-hyperplane nodes of
            sign(side) * (u - (a+b)/2).
        off_hyperplane_nodes (int): Number of nodes checked.
        tolerance (float): 10 * tol.
        passed (bool): min_signed_deviation > -tolerance.
    """

    min_signed_deviation: float
    off_hyperplane_nodes: int
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    """Ordering of two Dirichlet solutions with ordered data.

    Attributes:
        max_violation (float): max(u_low - u_high), negative when strict.
        tolerance (float): 10 * tol.
        passed (bool): max_violation <= tolerance.
    """

    max_violation: float
    tolerance: float
    passed: bool
