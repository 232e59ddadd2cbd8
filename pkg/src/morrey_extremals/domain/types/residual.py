from dataclasses import dataclass

import numpy as np

from domain.exceptions import ValidationError
from domain.types.lattice import Lattice


@dataclass(frozen=True, eq=False)
class PinMasses:
    """Discrete Dirac masses of an extremal at its pins.

    Attributes:
        at_x0 (float): Mass at x0.
        at_y0 (float): Mass at y0.
        expected (float): J_p(a - b) / (|x0 - y0|^(sp - n) * C^p), the mass
            predicted at x0.
        fitted_factor (float): (at_x0 - at_y0) / (2 * expected).
    """

    at_x0: float
    at_y0: float
    expected: float
    fitted_factor: float


@dataclass(frozen=True, eq=False)
class Residual:
    """Values of the discrete fractional p-Laplacian at selected nodes.

    Attributes:
        lattice (Lattice): Lattice of the evaluated function.
        nodes (np.ndarray): Node indices.
        values (np.ndarray): Operator value per node.
        relative (np.ndarray | None): Per-node imbalance relative to the total
            absolute interaction, when computed.
        pin_masses (PinMasses | None): Pin masses for Euler-Lagrange residuals.
    """

    lattice: Lattice
    nodes: np.ndarray
    values: np.ndarray
    relative: np.ndarray | None = None
    pin_masses: PinMasses | None = None

    def __post_init__(self) -> None:
        """Validates the residual.

        Raises:
            ValidationError: If the arrays disagree or a value is not finite.
        """
        nodes = np.asarray(self.nodes, dtype=np.intp)
        values = np.asarray(self.values, dtype=float)
        if nodes.shape != values.shape:
            raise ValidationError("Residual nodes and values must align")
        if not np.all(np.isfinite(values)):
            raise ValidationError("Residual values must be finite")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def max_abs(self) -> float:
        """Largest absolute residual, 0 when empty."""
        return float(np.max(np.abs(self.values), initial=0.0))

    @property
    def mean_abs(self) -> float:
        """Mean absolute residual, 0 when empty."""
        return float(np.mean(np.abs(self.values))) if self.values.size else 0.0

    @property
    def max_relative(self) -> float | None:
        """Largest relative imbalance, if computed."""
        if self.relative is None:
            return None
        return float(np.max(self.relative, initial=0.0))

    def to_rows(self) -> list[tuple[float, ...]]:
        """Rows (node_index, x[, y], residual) in node order."""
        coordinates = self.lattice.coordinates
        return [
            (int(node), *(float(c) for c in coordinates[node]), float(value))
            for node, value in zip(self.nodes, self.values, strict=True)
        ]
