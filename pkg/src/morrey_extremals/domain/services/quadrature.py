"""Quadrature of the Gagliardo kernel |x - y|^-(n + sp) on lattice cells."""

import itertools
import math

import numpy as np
from scipy.integrate import quad

from domain.types.enums import NearRule
from domain.types.params import FracParams

# Subcells per axis in the subcell near-pair rule.
SUBCELLS = 4
# Offsets (in cells) below this Euclidean length get a near-pair weight.
NEAR_RADIUS = 2.0
# Half side, in cells, of the block shared out among the near pairs.
NEAR_BLOCK = 1.5
QUAD_RELATIVE_TOLERANCE = 1e-10


def subcell_centers(n: int, spacing: float) -> np.ndarray:
    """Centers of the SUBCELLS^n subcells of a cell centered at the origin."""
    ticks = ((np.arange(SUBCELLS) + 0.5) / SUBCELLS - 0.5) * spacing
    return np.array(list(itertools.product(ticks, repeat=n)))


def near_pair_weight(
    offset: np.ndarray,
    spacing: float,
    kernel_exponent: float,
) -> float:
    """Subcell-refined double integral of the kernel over two distinct cells.

    Args:
        offset (np.ndarray): Integer offset between the two cells, nonzero.
        spacing (float): Cell side h.
        kernel_exponent (float): The exponent n + sp.

    Returns:
        float: Sum over subcell pairs of (h/SUBCELLS)^(2n) / |m_a - m_b|^(n + sp).
    """
    n = offset.shape[0]
    centers = subcell_centers(n, spacing)
    shift = spacing * offset.astype(float)
    differences = shift[None, None, :] + centers[None, :, :] - centers[:, None, :]
    distances = np.linalg.norm(differences, axis=-1)
    volume = (spacing / SUBCELLS) ** n
    return float(volume**2 * np.sum(distances ** (-kernel_exponent)))


def _sector_integral(order: float, lower: float, upper: float) -> float:
    """Integral of cos(phi)^-order over [lower, upper] within [0, pi/4]."""
    value, _ = quad(
        lambda phi: math.cos(phi) ** -order,
        lower,
        upper,
        epsrel=QUAD_RELATIVE_TOLERANCE,
    )
    return float(value)


def near_moment_weight(
    offset: np.ndarray,
    spacing: float,
    params: FracParams,
) -> float:
    """Near-pair weight carrying the p-th moment of the kernel.

    The block [-3h/2, 3h/2]^n around a cell is cut into one angular sector per
    neighbor: two half-lines on the line, eight sectors of angle pi/4 in the
    plane. The neighbor at offset k gets h^n times the integral of
    |d|^(p - n - sp) over its sector, divided by |hk|^p. The near pairs of a
    linear function then carry the energy the kernel puts on the block,
    exactly in one dimension and up to the angular rule in two. The leading
    O(h^(p - sp)) error of the operator on smooth functions cancels with it.

    Args:
        offset (np.ndarray): Integer offset with entries in {-1, 0, 1}, nonzero.
        spacing (float): Cell side h.
        params (FracParams): Parameters (n, s, p).

    Returns:
        float: The weight of the pair.
    """
    order = params.p - params.s * params.p
    radial = (NEAR_BLOCK * spacing) ** order / order
    if params.n == 1:
        moment = radial
    elif np.count_nonzero(offset) == 1:
        moment = 2.0 * radial * _sector_integral(order, 0.0, math.pi / 8)
    else:
        moment = 2.0 * radial * _sector_integral(order, math.pi / 8, math.pi / 4)
    length = spacing * float(np.linalg.norm(offset))
    return spacing**params.n * moment / length**params.p


def offset_table(
    nodes_per_axis: int,
    params: FracParams,
    spacing: float,
    near_rule: NearRule = NearRule.MOMENT,
) -> np.ndarray:
    """Pair weights for every integer offset in [-(m - 1), m - 1]^n.

    Entry [k + m - 1] holds the weight of two cells at offset k. Offsets
    shorter than NEAR_RADIUS cells use the near rule, the others the midpoint
    weight h^(2n)/|hk|^(n + sp). The table is invariant under every signed
    axis permutation, entry by entry.

    Args:
        nodes_per_axis (int): Number m of nodes along one axis.
        params (FracParams): Parameters (n, s, p).
        spacing (float): Lattice spacing h.
        near_rule (NearRule): Weight rule of the near pairs.

    Returns:
        np.ndarray: Array of shape (2m - 1,) * n with a zero center entry.
    """
    n = params.n
    kernel_exponent = params.kernel_exponent
    span = nodes_per_axis - 1
    offsets = np.indices((2 * span + 1,) * n) - span
    squared = np.zeros(offsets.shape[1:], dtype=float)
    for axis in range(n):
        squared += (spacing * offsets[axis]) ** 2
    with np.errstate(divide="ignore"):
        table = spacing ** (2 * n) * squared ** (-kernel_exponent / 2.0)
    table[(span,) * n] = 0.0

    reach = math.ceil(NEAR_RADIUS)
    cache: dict[tuple[int, ...], float] = {}
    for offset in itertools.product(range(-reach, reach + 1), repeat=n):
        length = math.sqrt(sum(k * k for k in offset))
        if length == 0.0 or length >= NEAR_RADIUS:
            continue
        if any(abs(k) > span for k in offset):
            continue
        representative = tuple(sorted(abs(k) for k in offset))
        if representative not in cache:
            cache[representative] = (
                near_moment_weight(np.array(representative), spacing, params)
                if near_rule is NearRule.MOMENT
                else near_pair_weight(
                    np.array(representative), spacing, kernel_exponent
                )
            )
        table[tuple(k + span for k in offset)] = cache[representative]
    return table


def exterior_integral(
    point: np.ndarray,
    half_width: float,
    kernel_exponent: float,
) -> float:
    """Integral of |x - y|^-(n + sp) over y outside the cube [-a, a]^n.

    Args:
        point (np.ndarray): The point x, strictly inside the cube.
        half_width (float): Cube half side a.
        kernel_exponent (float): The exponent n + sp.

    Returns:
        float: The exterior integral, analytic for n = 1 and an adaptive polar
        quadrature for n = 2.
    """
    sp = kernel_exponent - point.shape[0]
    if point.shape[0] == 1:
        x = float(point[0])
        return ((half_width - x) ** -sp + (half_width + x) ** -sp) / sp

    x, y = float(point[0]), float(point[1])

    def integrand(theta: float) -> float:
        direction = (math.cos(theta), math.sin(theta))
        exits = []
        for coordinate, component in zip((x, y), direction, strict=True):
            if component > 0:
                exits.append((half_width - coordinate) / component)
            elif component < 0:
                exits.append((-half_width - coordinate) / component)
        return min(exits) ** -sp / sp

    corners = sorted(
        math.atan2(cy - y, cx - x) % (2 * math.pi)
        for cx in (-half_width, half_width)
        for cy in (-half_width, half_width)
    )
    value, _ = quad(
        integrand,
        0.0,
        2 * math.pi,
        points=corners,
        epsrel=QUAD_RELATIVE_TOLERANCE,
        limit=200,
    )
    return float(value)
