import itertools
import math
from collections.abc import Sequence

import numpy as np

from domain.exceptions import DegenerateError, EmptyRegionError, MismatchError
from domain.services.quadrature import exterior_integral, offset_table
from domain.types.enums import ExteriorRule, NearRule
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.reports import ClarksonReport, MorreyReport
from domain.types.weights import ROW_BLOCK, KernelWeights

# Slack on ball membership, relative to the spacing.
BALL_SLACK = 1e-9


def build_weights(
    lattice: Lattice,
    exterior_rule: ExteriorRule = ExteriorRule.QUADRATURE,
    near_rule: NearRule = NearRule.MOMENT,
) -> KernelWeights:
    """Builds the pair and exterior weights of a lattice.

    Pairs at distance >= 2h get the midpoint weight h^(2n)/|x_i - x_j|^(n+sp).
    Closer pairs get the moment weight of near_moment_weight by default, or
    the 4^n subcell-refined double integral over both cells. The QUADRATURE
    exterior rule integrates the kernel exactly over the complement of the
    box. The LATTICE rule assigns each node the weight its cell would have
    with all lattice cells outside the box plus the continuum beyond them, so
    that a node far from the box edge sees the same total weight wherever it
    sits.

    Args:
        lattice (Lattice): The lattice.
        exterior_rule (ExteriorRule): Exterior weight rule.
        near_rule (NearRule): Near-pair weight rule.

    Returns:
        KernelWeights: The weights.
    """
    params = lattice.params
    table = offset_table(lattice.nodes_per_axis, params, lattice.spacing, near_rule)
    table.setflags(write=False)
    # Cells beyond the table reach, seen from the origin cell.
    reach = (lattice.nodes_per_axis - 0.5) * lattice.spacing
    tail = lattice.cell_volume * exterior_integral(
        np.zeros(lattice.n), reach, params.kernel_exponent
    )
    return KernelWeights(
        lattice=lattice,
        offset_table=table,
        exterior_rule=exterior_rule,
        saturation=float(table.sum()) + tail,
        near_rule=near_rule,
    )


def _check_lattice(u: GridFunction, weights: KernelWeights) -> None:
    if not u.lattice.is_compatible(weights.lattice):
        raise MismatchError("Function and weights live on different lattices")


def energy_terms(
    values: np.ndarray,
    far_field: float,
    weights: KernelWeights,
) -> tuple[float, float]:
    """Pair and exterior parts of the p-energy.

    The pair part sums w_ij |u_i - u_j|^p over i < j in row-major order and
    doubles it; the exterior part is 2 sum_i e_i |u_i - far_field|^p.

    Returns:
        tuple[float, float]: (pair energy, exterior energy).
    """
    p = weights.lattice.params.p
    count = values.shape[0]
    upper = 0.0
    for block, rows in weights.iter_row_blocks():
        differences = np.abs(values[block, None] - values[None, :]) ** p
        above = np.arange(count)[None, :] > block[:, None]
        upper += float(np.sum(np.where(above, rows * differences, 0.0)))
    exterior = float(
        np.sum(weights.exterior_weights * np.abs(values - far_field) ** p)
    )
    return 2.0 * upper, 2.0 * exterior


def gagliardo_energy(u: GridFunction, weights: KernelWeights) -> float:
    """Discrete p-energy [u]^p including the far-field interaction.

    Raises:
        MismatchError: If u and weights live on different lattices.
    """
    _check_lattice(u, weights)
    pair, exterior = energy_terms(u.values, u.far_field, weights)
    return pair + exterior


def gagliardo_seminorm(u: GridFunction, weights: KernelWeights) -> float:
    """Discrete Gagliardo seminorm, the p-th root of the energy.

    Raises:
        MismatchError: If u and weights live on different lattices.
    """
    return gagliardo_energy(u, weights) ** (1.0 / u.lattice.params.p)


def holder_seminorm(u: GridFunction) -> tuple[float, tuple[int, int]]:
    """Discrete Hölder seminorm max |u_i - u_j| / |x_i - x_j|^alpha over node pairs.

    Returns:
        tuple[float, tuple[int, int]]: The maximum and the lexicographically
        smallest pair (i, j), i < j, attaining it.
    """
    lattice = u.lattice
    alpha = lattice.params.alpha
    coordinates = lattice.coordinates
    values = u.values
    count = lattice.node_count
    best, best_pair = 0.0, (0, 1)
    for start in range(0, count - 1, ROW_BLOCK):
        block = np.arange(start, min(start + ROW_BLOCK, count - 1))
        distances = np.linalg.norm(
            coordinates[block, None, :] - coordinates[None, :, :], axis=-1
        )
        above = np.arange(count)[None, :] > block[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            quotients = np.abs(values[block, None] - values[None, :]) / distances**alpha
        quotients = np.where(above, quotients, -1.0)
        flat = int(np.argmax(quotients))
        row, column = divmod(flat, count)
        if quotients[row, column] > best:
            best = float(quotients[row, column])
            best_pair = (int(block[row]), int(column))
    return best, best_pair


def pair_quotient(u: GridFunction, pair: tuple[int, int]) -> float:
    """Difference quotient |u_i - u_j| / |x_i - x_j|^alpha of one pair."""
    i, j = pair
    coordinates = u.lattice.coordinates
    distance = float(np.linalg.norm(coordinates[i] - coordinates[j]))
    return abs(float(u.values[i] - u.values[j])) / distance**u.lattice.params.alpha


def _ball_nodes(lattice: Lattice, center: Sequence[float], radius: float) -> np.ndarray:
    offsets = lattice.coordinates - np.asarray(center, dtype=float)[None, :]
    inside = np.linalg.norm(offsets, axis=1) <= radius + BALL_SLACK * lattice.spacing
    return np.flatnonzero(inside)


def mean_oscillation(u: GridFunction, center: Sequence[float], rho: float) -> float:
    """Scaled mean oscillation rho^-alpha avg_B |u - avg_B u| over a closed ball.

    Raises:
        EmptyRegionError: If no node lies in the ball.
    """
    nodes = _ball_nodes(u.lattice, center, rho)
    if nodes.size == 0:
        raise EmptyRegionError(f"No node within {rho} of {tuple(center)}")
    local = u.values[nodes]
    deviation = float(np.mean(np.abs(local - np.mean(local))))
    return rho ** (-u.lattice.params.alpha) * deviation


def campanato_ratio(u: GridFunction, radii: Sequence[float] | None = None) -> float:
    """Hölder seminorm divided by the largest scaled mean oscillation.

    Balls are centered at every node. Default radii are h * 2^k up to L.

    Raises:
        DegenerateError: If u is constant on the lattice.
    """
    lattice = u.lattice
    if radii is None:
        count = int(math.log2(lattice.half_extent / lattice.spacing)) + 1
        radii = [lattice.spacing * 2**k for k in range(count)]
    oscillation = max(
        mean_oscillation(u, lattice.coordinates[i], rho)
        for i, rho in itertools.product(range(lattice.node_count), radii)
    )
    if oscillation == 0.0:
        raise DegenerateError("Mean oscillation vanishes for a constant function")
    holder, _ = holder_seminorm(u)
    return holder / oscillation


def regional_gagliardo(
    u: GridFunction,
    weights: KernelWeights,
    center: Sequence[float],
    radius: float,
) -> float:
    """Gagliardo seminorm restricted to node pairs inside a closed ball.

    Raises:
        MismatchError: If u and weights live on different lattices.
    """
    _check_lattice(u, weights)
    nodes = _ball_nodes(u.lattice, center, radius)
    if nodes.size < 2:  # noqa: PLR2004
        return 0.0
    p = u.lattice.params.p
    local = weights.rows(nodes)[:, nodes]
    values = u.values[nodes]
    energy = float(np.sum(local * np.abs(values[:, None] - values[None, :]) ** p))
    return energy ** (1.0 / p)


def verify_morrey_bound(
    u: GridFunction,
    weights: KernelWeights,
    c_star_hat: float | None = None,
    allowance: float = 2e-2,
) -> MorreyReport:
    """Compares the Hölder seminorm of u with its Gagliardo seminorm.

    The regional constant localizes the seminorm to the ball whose diameter
    is the Hölder-attaining pair; it is an empirical fit.

    Args:
        u (GridFunction): A non-constant function.
        weights (KernelWeights): Weights of u's lattice.
        c_star_hat (float | None): Sharp constant to check the ratio against.
        allowance (float): Relative discretization allowance on the bound.

    Returns:
        MorreyReport: The report.

    Raises:
        DegenerateError: If u is constant.
        MismatchError: If u and weights live on different lattices.
    """
    _check_lattice(u, weights)
    if u.is_constant():
        raise DegenerateError("The Morrey ratio is undefined for a constant function")
    holder, argpair = holder_seminorm(u)
    gagliardo = gagliardo_seminorm(u, weights)
    coordinates = u.lattice.coordinates
    x, y = coordinates[argpair[0]], coordinates[argpair[1]]
    regional = regional_gagliardo(
        u, weights, (x + y) / 2.0, float(np.linalg.norm(x - y)) / 2.0
    )
    ratio = holder / gagliardo
    return MorreyReport(
        holder=holder,
        gagliardo=gagliardo,
        ratio=ratio,
        argpair=argpair,
        regional_constant=holder / regional if regional > 0 else math.inf,
        bound=c_star_hat,
        within_bound=(
            None if c_star_hat is None else ratio <= c_star_hat * (1.0 + allowance)
        ),
    )


def check_clarkson(
    u: GridFunction,
    v: GridFunction,
    weights: KernelWeights,
) -> ClarksonReport:
    """Evaluates the Clarkson inequality of the branch matching p.

    For p >= 2: [(u+v)/2]^p + [(u-v)/2]^p <= ([u]^p + [v]^p)/2.
    For p < 2, with q = p/(p-1):
    [(u+v)/2]^q + [(u-v)/2]^q <= (([u]^p + [v]^p)/2)^(q/p).

    Raises:
        MismatchError: If the functions live on different lattices.
    """
    _check_lattice(u, weights)
    _check_lattice(v, weights)
    params = u.lattice.params
    p = params.p
    half_sum = u.with_values((u.values + v.values) / 2, (u.far_field + v.far_field) / 2)
    half_diff = u.with_values(
        (u.values - v.values) / 2, (u.far_field - v.far_field) / 2
    )
    mean_energy = (gagliardo_energy(u, weights) + gagliardo_energy(v, weights)) / 2
    if p >= 2:  # noqa: PLR2004
        exponent = p
        lhs = gagliardo_energy(half_sum, weights) + gagliardo_energy(half_diff, weights)
        rhs = mean_energy
    else:
        exponent = params.conjugate
        lhs = gagliardo_seminorm(half_sum, weights) ** exponent + gagliardo_seminorm(
            half_diff, weights
        ) ** exponent
        rhs = mean_energy ** (exponent / p)
    slack = rhs - lhs
    return ClarksonReport(
        exponent=exponent,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        relative_slack=slack / rhs if rhs > 0 else 0.0,
    )
