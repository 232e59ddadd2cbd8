from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from domain.services.quadrature import exterior_integral
from domain.types.enums import ExteriorRule, NearRule
from domain.types.lattice import Lattice

# Rows materialized per block when sweeping the pair set.
ROW_BLOCK = 256


@dataclass(frozen=True, eq=False)
class KernelWeights:
    """Symmetric pair weights w_ij approximating the Gagliardo kernel.

    The weights are translation invariant, so only the table of weights per
    integer offset is stored; rows are expanded on demand. Each node also
    interacts with the region outside the box through its exterior weight e_i,
    which multiplies |u_i - far_field|^p twice in the energy (both orderings
    of the pair).

    Attributes:
        lattice (Lattice): The lattice the weights belong to.
        offset_table (np.ndarray): Weight per integer offset, centered.
        exterior_rule (ExteriorRule): How the exterior weights are obtained.
        saturation (float): Pair weight of one cell with all of R^n minus the
            cell, as seen from the infinite lattice; used by the LATTICE rule.
        near_rule (NearRule): Rule that produced the near-pair entries.
    """

    lattice: Lattice
    offset_table: np.ndarray
    exterior_rule: ExteriorRule
    saturation: float
    near_rule: NearRule = NearRule.MOMENT
    # Quadrature exterior weights per symmetry class of nodes.
    _exterior_cache: dict[tuple[int, ...], float] = field(
        default_factory=dict, init=False, repr=False
    )

    def pair(self, i: int, j: int) -> float:
        """Weight of the node pair (i, j); zero on the diagonal."""
        multi = self.lattice.multi_indices
        offset = multi[j] - multi[i] + self.lattice.nodes_per_axis - 1
        return float(self.offset_table[tuple(offset)])

    def rows(self, indices: Sequence[int] | np.ndarray) -> np.ndarray:
        """Weight rows of the given nodes, shape (len(indices), N)."""
        selected = np.atleast_1d(np.asarray(indices, dtype=np.intp))
        multi = self.lattice.multi_indices
        offsets = multi[None, :, :] - multi[selected, None, :]
        offsets += self.lattice.nodes_per_axis - 1
        return self.offset_table[tuple(offsets[..., k] for k in range(self.lattice.n))]

    def row(self, i: int) -> np.ndarray:
        """Weight row of one node."""
        return self.rows([i])[0]

    def iter_row_blocks(
        self,
        indices: Sequence[int] | np.ndarray | None = None,
    ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yields (node indices, weight rows) blocks covering the given nodes."""
        selected = (
            np.arange(self.lattice.node_count)
            if indices is None
            else np.atleast_1d(np.asarray(indices, dtype=np.intp))
        )
        for start in range(0, selected.size, ROW_BLOCK):
            block = selected[start : start + ROW_BLOCK]
            yield block, self.rows(block)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense N x N weight matrix."""
        dense = np.empty((self.lattice.node_count,) * 2)
        for block, rows in self.iter_row_blocks():
            dense[block] = rows
        dense.setflags(write=False)
        return dense

    def exterior_at(self, indices: Sequence[int] | np.ndarray) -> np.ndarray:
        """Exterior weights of the given nodes."""
        selected = np.atleast_1d(np.asarray(indices, dtype=np.intp))
        if self.exterior_rule is ExteriorRule.LATTICE:
            sums = np.concatenate(
                [rows.sum(axis=1) for _, rows in self.iter_row_blocks(selected)]
                or [np.empty(0)]
            )
            return np.maximum(self.saturation - sums, 0.0)
        box = self.lattice.half_extent + self.lattice.spacing / 2.0
        coordinates = self.lattice.coordinates
        exponent = self.lattice.params.kernel_exponent
        weights = np.empty(selected.size)
        for position, i in enumerate(selected):
            key = tuple(sorted(abs(int(k)) for k in self.lattice.centered_indices[i]))
            if key not in self._exterior_cache:
                self._exterior_cache[key] = self.lattice.cell_volume * (
                    exterior_integral(coordinates[i], box, exponent)
                )
            weights[position] = self._exterior_cache[key]
        return weights

    @cached_property
    def exterior_weights(self) -> np.ndarray:
        """Exterior weights of every node."""
        weights = self.exterior_at(np.arange(self.lattice.node_count))
        weights.setflags(write=False)
        return weights
