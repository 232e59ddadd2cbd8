import math
from collections.abc import Iterable, Sequence

import numpy as np

from domain.exceptions import GeometryError, MismatchError
from domain.services.grid import build_lattice
from domain.services.seminorm import build_weights
from domain.types.enums import ExteriorRule, NearRule
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.reports import BarrierRefinementReport
from domain.types.residual import PinMasses, Residual
from domain.types.results import ExtremalResult
from domain.types.weights import KernelWeights

# Factor by which refinement must shrink the max-abs barrier residual.
BARRIER_REDUCTION = 1.5


def j_p(a: float | np.ndarray, p: float) -> float | np.ndarray:
    """The odd monotone map a -> |a|^(p-2) a, with J_p(0) = 0."""
    values = np.asarray(a, dtype=float)
    mapped = np.sign(values) * np.abs(values) ** (p - 1.0)
    return float(mapped) if mapped.ndim == 0 else mapped


def node_balance(
    values: np.ndarray,
    far_field: float,
    weights: KernelWeights,
    nodes: Sequence[int] | np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Interaction balance sum_j w_kj J_p(u_k - u_j) + e_k J_p(u_k - f).

    Args:
        values (np.ndarray): Node values.
        far_field (float): Far-field value.
        weights (KernelWeights): Pair and exterior weights.
        nodes (Sequence[int] | np.ndarray | None): Nodes to evaluate, all if None.

    Returns:
        tuple[np.ndarray, np.ndarray]: The balance per node and its exterior
        part e_k J_p(u_k - f).
    """
    p = weights.lattice.params.p
    selected = (
        np.arange(values.shape[0])
        if nodes is None
        else np.atleast_1d(np.asarray(nodes, dtype=np.intp))
    )
    pair = np.empty(selected.size)
    offset = 0
    for block, rows in weights.iter_row_blocks(selected):
        pair[offset : offset + block.size] = np.sum(
            rows * j_p(values[block, None] - values[None, :], p), axis=1
        )
        offset += block.size
    exterior_weights = (
        weights.exterior_weights
        if nodes is None
        else weights.exterior_at(selected)
    )
    exterior = exterior_weights * j_p(values[selected] - far_field, p)
    return pair + exterior, exterior


def energy_gradient(
    values: np.ndarray,
    far_field: float,
    weights: KernelWeights,
) -> tuple[np.ndarray, float]:
    """Gradient of the p-energy with respect to node values and far field.

    Returns:
        tuple[np.ndarray, float]: dE/du_k = 2p (sum_j w_kj J_p(u_k - u_j)
        + e_k J_p(u_k - f)), and dE/df = -2p sum_k e_k J_p(u_k - f).
    """
    p = weights.lattice.params.p
    balance, exterior = node_balance(values, far_field, weights)
    return 2.0 * p * balance, -2.0 * p * float(np.sum(exterior))


def _absolute_interaction(
    values: np.ndarray,
    far_field: float,
    weights: KernelWeights,
    nodes: np.ndarray,
) -> np.ndarray:
    """sum_j w_kj |J_p(u_k - u_j)| + e_k |J_p(u_k - f)| per node."""
    p = weights.lattice.params.p
    totals = np.empty(nodes.size)
    offset = 0
    for block, rows in weights.iter_row_blocks(nodes):
        totals[offset : offset + block.size] = np.sum(
            rows * np.abs(values[block, None] - values[None, :]) ** (p - 1.0), axis=1
        )
        offset += block.size
    exterior = weights.exterior_at(nodes) * np.abs(values[nodes] - far_field) ** (
        p - 1.0
    )
    return totals + exterior


def _check_lattice(u: GridFunction, weights: KernelWeights) -> None:
    if not u.lattice.is_compatible(weights.lattice):
        raise MismatchError("Function and weights live on different lattices")


def frac_p_laplacian_field(
    u: GridFunction,
    weights: KernelWeights,
    nodes: Sequence[int] | np.ndarray | None = None,
) -> np.ndarray:
    """Discrete fractional p-Laplacian at the given nodes.

    It equals (1/(p h^n)) dE/du_k, that is 2 h^-n sum_j w_kj J_p(u_k - u_j)
    plus the far-field term, so stationary points of the energy are exactly
    the discrete (s,p)-harmonic functions.

    Raises:
        MismatchError: If u and weights live on different lattices.
    """
    _check_lattice(u, weights)
    balance, _ = node_balance(u.values, u.far_field, weights, nodes)
    return 2.0 * balance / u.lattice.cell_volume


def frac_p_laplacian(u: GridFunction, weights: KernelWeights, node: int) -> float:
    """Discrete fractional p-Laplacian of u at one node."""
    return float(frac_p_laplacian_field(u, weights, [node])[0])


def barrier_value(
    x: Sequence[float] | np.ndarray,
    params: FracParams,
) -> float | np.ndarray:
    """Barrier G(x) = |x|^((sp - n)/(p - 1)); vectorized over the last axis."""
    radius = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
    value = radius**params.barrier_exponent
    return float(value) if np.ndim(value) == 0 else value


def sample_barrier(lattice: Lattice) -> GridFunction:
    """Barrier sampled at the nodes, far field G at radius L + 1."""
    params = lattice.params
    return GridFunction(
        lattice,
        barrier_value(lattice.coordinates, params),
        (lattice.half_extent + 1.0) ** params.barrier_exponent,
    )


def annulus_nodes(lattice: Lattice, r_min: float, r_max: float) -> np.ndarray:
    """Nodes with r_min <= |x| <= r_max."""
    slack = 1e-9 * lattice.spacing
    radii = lattice.radii
    return np.flatnonzero((radii >= r_min - slack) & (radii <= r_max + slack))


def operator_residual(
    u: GridFunction,
    weights: KernelWeights,
    nodes: Iterable[int],
) -> Residual:
    """Operator values and relative imbalances of u at the given nodes."""
    _check_lattice(u, weights)
    selected = np.asarray(sorted(set(nodes)), dtype=np.intp)
    balance, _ = node_balance(u.values, u.far_field, weights, selected)
    total = _absolute_interaction(u.values, u.far_field, weights, selected)
    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(total > 0, np.abs(balance) / total, 0.0)
    return Residual(
        lattice=u.lattice,
        nodes=selected,
        values=2.0 * balance / u.lattice.cell_volume,
        relative=relative,
    )


def verify_barrier_harmonicity(
    params: FracParams,
    lattice: Lattice,
    test_nodes: Iterable[int],
    weights: KernelWeights | None = None,
    function: GridFunction | None = None,
) -> Residual:
    """Operator residual of the sampled barrier at nodes away from the origin.

    Args:
        params (FracParams): Parameters; must match the lattice.
        lattice (Lattice): Lattice to sample on.
        test_nodes (Iterable[int]): Nodes at distance >= 2h from the origin.
        weights (KernelWeights | None): Weights of the lattice, built if None.
        function (GridFunction | None): Replaces the sampled barrier when given.

    Returns:
        Residual: Operator values and relative imbalances at the test nodes.

    Raises:
        GeometryError: If a test node lies within 2h of the origin.
        MismatchError: If params differ from the lattice parameters.
    """
    if params != lattice.params:
        raise MismatchError("Barrier parameters differ from the lattice parameters")
    nodes = list(test_nodes)
    radii = lattice.radii
    close = [i for i in nodes if radii[i] < 2.0 * lattice.spacing * (1.0 - 1e-9)]
    if close:
        raise GeometryError(
            f"Barrier test nodes must stay 2h away from the origin, got {close[:5]}"
        )
    sampled = sample_barrier(lattice) if function is None else function
    if weights is None:
        weights = build_weights(lattice)
    return operator_residual(sampled, weights, nodes)


def euler_lagrange_residual(res: ExtremalResult, weights: KernelWeights) -> Residual:
    """Operator residual of an extremal, with the discrete Dirac masses at the pins.

    The mass at a pin is (1/p) dE/du, i.e. h^n times the operator there.

    Raises:
        MismatchError: If the extremal and weights live on different lattices.
    """
    u = res.u
    _check_lattice(u, weights)
    params = u.lattice.params
    pins = res.pins
    free = np.setdiff1d(np.arange(u.lattice.node_count), pins.nodes)
    values = frac_p_laplacian_field(u, weights, free)
    balance, _ = node_balance(u.values, u.far_field, weights, pins.nodes)
    at_x0, at_y0 = (2.0 * float(b) for b in balance)
    coordinates = u.lattice.coordinates
    distance = float(np.linalg.norm(coordinates[pins.x0] - coordinates[pins.y0]))
    expected = float(j_p(pins.a - pins.b, params.p)) / (
        distance**params.excess * res.c_star_hat**params.p
    )
    fitted = (at_x0 - at_y0) / (2.0 * expected) if expected != 0 else math.nan
    return Residual(
        lattice=u.lattice,
        nodes=free,
        values=values,
        pin_masses=PinMasses(
            at_x0=at_x0,
            at_y0=at_y0,
            expected=expected,
            fitted_factor=fitted,
        ),
    )


def barrier_refinement(
    params: FracParams,
    coarse: tuple[float, float],
    fine: tuple[float, float],
    radii: tuple[float, float] = (1.0, 2.0),
    exterior_rule: ExteriorRule = ExteriorRule.QUADRATURE,
    near_rule: NearRule = NearRule.MOMENT,
) -> BarrierRefinementReport:
    """Barrier residuals at test nodes in an annulus, on a coarse and a fine lattice.

    Args:
        params (FracParams): Parameters.
        coarse (tuple[float, float]): (h, L) of the coarse lattice.
        fine (tuple[float, float]): (h, L) of the refined lattice.
        radii (tuple[float, float]): Radial range of the test nodes.
        exterior_rule (ExteriorRule): Exterior weight rule of both lattices.
        near_rule (NearRule): Near-pair weight rule of both lattices.

    Returns:
        BarrierRefinementReport: Absolute and relative residuals on both
        lattices; the refinement passes when the max-abs residual shrinks by
        at least BARRIER_REDUCTION.
    """
    residuals = []
    for spacing, extent in (coarse, fine):
        lattice = build_lattice(params, extent, spacing)
        nodes = annulus_nodes(lattice, *radii)
        weights = build_weights(lattice, exterior_rule, near_rule)
        residuals.append(verify_barrier_harmonicity(params, lattice, nodes, weights))
    before, after = residuals
    coarse_abs = before.max_abs
    fine_abs = after.max_abs
    reduction = coarse_abs / fine_abs if fine_abs > 0 else math.inf
    return BarrierRefinementReport(
        coarse=coarse,
        fine=fine,
        coarse_max_abs=coarse_abs,
        fine_max_abs=fine_abs,
        coarse_max_relative=before.max_relative or 0.0,
        fine_max_relative=after.max_relative or 0.0,
        reduction=reduction,
        passed=reduction >= BARRIER_REDUCTION,
    )
