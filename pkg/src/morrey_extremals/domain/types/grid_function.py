import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from domain.exceptions import ValidationError
from domain.types.lattice import Lattice


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Node values over a lattice plus one constant value outside the box.

    The values array is copied on construction and made read-only.

    Attributes:
        lattice (Lattice): The lattice the values live on.
        values (np.ndarray): One finite value per node, in node order.
        far_field (float): Value at every point outside [-L, L]^n.
    """

    lattice: Lattice
    values: np.ndarray
    far_field: float = 0.0

    def __post_init__(self) -> None:
        """Validates and freezes the node values.

        Raises:
            ValidationError: If the shape is wrong or a value is not finite.
        """
        values = np.array(self.values, dtype=float)
        if values.shape != (self.lattice.node_count,):
            raise ValidationError(
                f"Expected {self.lattice.node_count} node values, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("Grid function values must be finite")
        if not math.isfinite(self.far_field):
            raise ValidationError("Far-field value must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "far_field", float(self.far_field))

    @classmethod
    def constant(cls, lattice: Lattice, value: float) -> "GridFunction":
        """The function equal to value everywhere, far field included."""
        return cls(lattice, np.full(lattice.node_count, value), value)

    @classmethod
    def from_callable(
        cls,
        lattice: Lattice,
        function: Callable[[np.ndarray], np.ndarray],
        far_field: float = 0.0,
    ) -> "GridFunction":
        """Samples a vectorized function at the lattice nodes.

        Args:
            lattice (Lattice): Target lattice.
            function (Callable[[np.ndarray], np.ndarray]): Maps an (N, n) array
                of coordinates to N values.
            far_field (float): Value outside the box.

        Returns:
            GridFunction: The sampled function.
        """
        return cls(lattice, function(lattice.coordinates), far_field)

    def with_values(
        self,
        values: np.ndarray,
        far_field: float | None = None,
    ) -> "GridFunction":
        """Copy on the same lattice with new values and optionally a new far field."""
        return GridFunction(
            self.lattice,
            values,
            self.far_field if far_field is None else far_field,
        )

    def evaluate(self, point: Sequence[float]) -> float:
        """Value at a point: the node value inside the box, far_field outside.

        Raises:
            GeometryError: If the point is inside the box but not a node.
        """
        if not self.lattice.contains(point):
            return self.far_field
        return float(self.values[self.lattice.index_of(point)])

    def as_grid(self) -> np.ndarray:
        """Values reshaped onto the lattice grid."""
        return self.values.reshape(self.lattice.shape)

    def is_constant(self) -> bool:
        """Whether the node values and the far field all coincide."""
        return bool(np.all(self.values == self.far_field))
