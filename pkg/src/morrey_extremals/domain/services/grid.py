import numpy as np

from domain.exceptions import GeometryError
from domain.types.enums import TransformKind
from domain.types.grid_function import GridFunction
from domain.types.lattice import SNAP_TOLERANCE, Lattice
from domain.types.params import FracParams
from domain.types.transforms import RigidTransform


def _is_integer(value: float) -> bool:
    return abs(value - round(value)) <= SNAP_TOLERANCE * max(1.0, abs(value))


def build_lattice(params: FracParams, L: float, h: float) -> Lattice:
    """Builds the lattice of spacing h on [-L, L]^n.

    Args:
        params (FracParams): Validated parameters.
        L (float): Half side of the box, at least 1.
        h (float): Spacing; 1/h and L/h must be integers.

    Returns:
        Lattice: The lattice.

    Raises:
        GeometryError: If the box or the spacing do not fit.
    """
    if not (h > 0 and np.isfinite(h)):
        raise GeometryError(f"Spacing must be positive, got {h}")
    if not L >= 1.0:
        raise GeometryError(f"Half extent must be at least 1, got {L}")
    if not _is_integer(1.0 / h):
        raise GeometryError(f"Spacing {h} does not divide 1")
    if not _is_integer(L / h):
        raise GeometryError(f"Spacing {h} does not divide the half extent {L}")
    return Lattice(params=params, half_extent=float(L), spacing=float(h))


def _isometry_image(lattice: Lattice, transform: RigidTransform) -> np.ndarray:
    """Centered integer coordinates of T(x) for every node x."""
    points = lattice.centered_indices
    n = lattice.n
    match transform.kind:
        case TransformKind.TRANSLATE:
            if len(transform.shift) != n:
                raise GeometryError(f"Translation must have {n} components")
            return points + lattice.snap(transform.shift)
        case TransformKind.REFLECT_AXIS:
            if transform.axis >= n:
                raise GeometryError(f"No axis {transform.axis} in dimension {n}")
            image = points.copy()
            image[:, transform.axis] *= -1
            return image
        case TransformKind.ROTATE90:
            if n != 2:  # noqa: PLR2004
                raise GeometryError("Quarter turns need a two-dimensional lattice")
            image = points
            for _ in range(transform.turns):
                image = np.stack([-image[:, 1], image[:, 0]], axis=1)
            return image
        case TransformKind.PERMUTE_AXES:
            if len(transform.permutation) != n:
                raise GeometryError(f"Axis permutation must have {n} entries")
            return points[:, list(transform.permutation)]
        case _:
            raise GeometryError(f"{transform.kind} is not an isometry")


def _pull_back(u: GridFunction, transform: RigidTransform) -> GridFunction:
    lattice = u.lattice
    image = _isometry_image(lattice, transform)
    inside = np.all(np.abs(image) <= lattice.center_index, axis=1)
    source = np.ravel_multi_index(
        tuple((image[inside] + lattice.center_index).T),
        lattice.shape,
    )
    dropped = np.ones(lattice.node_count, dtype=bool)
    dropped[source] = False
    if np.any(u.values[dropped] != u.far_field):
        raise GeometryError(
            f"{transform.kind} moves nodes off the lattice that differ from "
            "the far field"
        )
    values = np.full(lattice.node_count, u.far_field)
    values[inside] = u.values[source]
    return u.with_values(values)


def apply_transform(u: GridFunction, transform: RigidTransform) -> GridFunction:
    """Applies a seminorm-preserving transformation.

    Isometries act by pullback, v(x) = u(Tx), with the far-field value used
    where Tx leaves the box. A translation may only push nodes holding the
    far-field value off the lattice, so that its inverse restores u exactly.
    Scaling by lambda moves the values onto the lattice of extent L/lambda
    and spacing h/lambda, node for node, and multiplies them by
    lambda^(n/p - s).

    Args:
        u (GridFunction): Function to transform.
        transform (RigidTransform): The transformation.

    Returns:
        GridFunction: The transformed function.

    Raises:
        GeometryError: If the image does not fit a lattice or a translation
            drops a value that differs from the far field.
    """
    match transform.kind:
        case TransformKind.NEGATE:
            return u.with_values(-u.values, -u.far_field)
        case TransformKind.ADD_CONSTANT:
            return u.with_values(
                u.values + transform.constant,
                u.far_field + transform.constant,
            )
        case TransformKind.SCALE:
            lattice = u.lattice
            factor = transform.factor
            target = build_lattice(
                lattice.params,
                lattice.half_extent / factor,
                lattice.spacing / factor,
            )
            if target.nodes_per_axis != lattice.nodes_per_axis:
                raise GeometryError(f"Scaling by {factor} changes the node count")
            weight = factor**lattice.params.scaling_exponent
            return GridFunction(target, weight * u.values, weight * u.far_field)
        case _:
            return _pull_back(u, transform)
