import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from domain.exceptions import GeometryError
from domain.types.params import FracParams

# Relative tolerance for snapping points onto lattice nodes.
SNAP_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Lattice:
    """Regular grid of spacing h on the box [-L, L]^n.

    Nodes are enumerated in row-major order, the first axis varying slowest.
    Coordinates are computed as h times centered integer indices, so the
    lattice is exactly symmetric about the origin.

    Attributes:
        params (FracParams): Parameters of the discretized space.
        half_extent (float): Half side length L of the truncation box.
        spacing (float): Grid spacing h.
    """

    params: FracParams
    half_extent: float
    spacing: float

    @property
    def n(self) -> int:
        """Space dimension."""
        return self.params.n

    @cached_property
    def center_index(self) -> int:
        """Integer index K = L/h of the origin along each axis."""
        return round(self.half_extent / self.spacing)

    @property
    def nodes_per_axis(self) -> int:
        """Number of nodes along one axis, 2L/h + 1."""
        return 2 * self.center_index + 1

    @property
    def node_count(self) -> int:
        """Total number of nodes."""
        return self.nodes_per_axis**self.n

    @property
    def shape(self) -> tuple[int, ...]:
        """Grid shape (m,) or (m, m)."""
        return (self.nodes_per_axis,) * self.n

    @property
    def cell_volume(self) -> float:
        """Volume h^n of the cell attached to each node."""
        return self.spacing**self.n

    @cached_property
    def multi_indices(self) -> np.ndarray:
        """Integer grid indices of every node, shape (N, n)."""
        grids = np.indices(self.shape).reshape(self.n, -1).T
        grids.setflags(write=False)
        return grids

    @cached_property
    def centered_indices(self) -> np.ndarray:
        """Integer offsets of every node from the origin, shape (N, n)."""
        centered = self.multi_indices - self.center_index
        centered.setflags(write=False)
        return centered

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Coordinates of every node, shape (N, n)."""
        coordinates = self.spacing * self.centered_indices.astype(float)
        coordinates.setflags(write=False)
        return coordinates

    @cached_property
    def radii(self) -> np.ndarray:
        """Euclidean norm of every node."""
        radii = np.linalg.norm(self.coordinates, axis=1)
        radii.setflags(write=False)
        return radii

    def multi_index(self, index: int) -> tuple[int, ...]:
        """Grid indices of a node.

        Args:
            index (int): Linear node index.

        Returns:
            tuple[int, ...]: Index along each axis.

        Raises:
            GeometryError: If the index is out of range.
        """
        if not 0 <= index < self.node_count:
            raise GeometryError(f"Node index {index} out of range")
        return tuple(int(k) for k in self.multi_indices[index])

    def flat_index(self, multi: Sequence[int]) -> int:
        """Linear index of the node with the given grid indices."""
        return int(np.ravel_multi_index(tuple(int(k) for k in multi), self.shape))

    def snap(self, point: Sequence[float]) -> np.ndarray:
        """Centered integer coordinates of a point lying on the infinite lattice.

        Args:
            point (Sequence[float]): A point in R^n.

        Returns:
            np.ndarray: Integer offsets k with point = h*k.

        Raises:
            GeometryError: If the point is not a lattice point.
        """
        scaled = np.asarray(point, dtype=float) / self.spacing
        if scaled.shape != (self.n,):
            raise GeometryError(f"Expected a point in R^{self.n}, got {point}")
        rounded = np.rint(scaled)
        allowance = SNAP_TOLERANCE * np.maximum(1.0, np.abs(scaled))
        if np.any(np.abs(scaled - rounded) > allowance):
            raise GeometryError(f"Point {tuple(point)} is not a lattice point")
        return rounded.astype(int)

    def contains(self, point: Sequence[float]) -> bool:
        """Whether a point lies in the closed truncation box."""
        bound = self.half_extent * (1.0 + SNAP_TOLERANCE)
        return bool(np.all(np.abs(np.asarray(point, dtype=float)) <= bound))

    def index_of(self, point: Sequence[float]) -> int:
        """Linear index of the node located at a point.

        Raises:
            GeometryError: If the point is off the lattice or outside the box.
        """
        offsets = self.snap(point)
        if np.any(np.abs(offsets) > self.center_index):
            raise GeometryError(f"Point {tuple(point)} lies outside the lattice box")
        return self.flat_index(offsets + self.center_index)

    def canonical_pins(self) -> tuple[int, int]:
        """Node indices of +e_n and -e_n."""
        unit = np.zeros(self.n)
        unit[-1] = 1.0
        return self.index_of(unit), self.index_of(-unit)

    def is_compatible(self, other: "Lattice") -> bool:
        """Whether two lattices describe the same grid for the same parameters."""
        return (
            self is other
            or (
                self.params == other.params
                and math.isclose(self.half_extent, other.half_extent, rel_tol=1e-12)
                and math.isclose(self.spacing, other.spacing, rel_tol=1e-12)
            )
        )
