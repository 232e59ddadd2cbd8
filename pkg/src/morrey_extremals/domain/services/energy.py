import numpy as np

from domain.exceptions import ValidationError
from domain.services.operator import energy_gradient
from domain.services.seminorm import energy_terms
from domain.types.grid_function import GridFunction
from domain.types.weights import KernelWeights


class PinnedEnergy:
    """The p-energy as a function of the unconstrained node values.

    Constrained nodes are eliminated by substituting their prescribed values.
    With a free far field the last variable is the far-field value.
    """

    def __init__(
        self,
        weights: KernelWeights,
        fixed_mask: np.ndarray,
        fixed_values: np.ndarray,
        far_field: float,
        *,
        far_field_free: bool = False,
    ) -> None:
        """Initialize the objective.

        Args:
            weights (KernelWeights): Pair and exterior weights.
            fixed_mask (np.ndarray): True at the constrained nodes.
            fixed_values (np.ndarray): Node values; read at constrained nodes.
            far_field (float): Far-field value, or its initial value if free.
            far_field_free (bool): Whether the far field is a variable.

        Raises:
            ValidationError: If the arrays do not match the lattice or nothing is free.
        """
        count = weights.lattice.node_count
        mask = np.asarray(fixed_mask, dtype=bool)
        if mask.shape != (count,) or np.shape(fixed_values) != (count,):
            raise ValidationError("Constraint arrays must have one entry per node")
        self.weights = weights
        self.p = weights.lattice.params.p
        self.free = np.flatnonzero(~mask)
        self.far_field_free = far_field_free
        if self.free.size == 0 and not far_field_free:
            raise ValidationError("The objective has no free variable")
        self._template = np.array(fixed_values, dtype=float)
        self._far_field = float(far_field)

    @property
    def dimension(self) -> int:
        """Number of free variables."""
        return self.free.size + int(self.far_field_free)

    def assemble(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        """Full node values and far field for a point of the free variables."""
        values = self._template.copy()
        values[self.free] = x[: self.free.size]
        far_field = float(x[-1]) if self.far_field_free else self._far_field
        return values, far_field

    def split(self, values: np.ndarray, far_field: float | None = None) -> np.ndarray:
        """Free variables of full node values (inverse of assemble)."""
        x = np.asarray(values, dtype=float)[self.free]
        if self.far_field_free:
            start = self._far_field if far_field is None else far_field
            x = np.append(x, start)
        return x

    def value(self, x: np.ndarray) -> float:
        """Energy at x."""
        values, far_field = self.assemble(x)
        pair, exterior = energy_terms(values, far_field, self.weights)
        return pair + exterior

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Gradient of the energy with respect to the free variables."""
        values, far_field = self.assemble(x)
        nodes, far = energy_gradient(values, far_field, self.weights)
        gradient = nodes[self.free]
        return np.append(gradient, far) if self.far_field_free else gradient

    def value_and_gradient(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Energy and gradient at x."""
        return self.value(x), self.gradient(x)

    def change(self, x: np.ndarray, dx: np.ndarray) -> float:
        """E(x + dx) - E(x), accumulated pair by pair.

        Every term is the difference of two p-th powers taken in a form that
        keeps its relative accuracy, so changes far below the rounding of E
        itself still get the right sign.
        """
        before, far_before = self.assemble(x)
        after, far_after = self.assemble(x + dx)
        fixed = np.ones(before.size, dtype=bool)
        fixed[self.free] = False
        total = 0.0
        for block, rows in self.weights.iter_row_blocks(self.free):
            terms = rows * _power_change(
                before[block, None] - before[None, :],
                after[block, None] - after[None, :],
                self.p,
            )
            total += float(terms.sum() + terms[:, fixed].sum())
        exterior = self.weights.exterior_weights * _power_change(
            before - far_before, after - far_after, self.p
        )
        return total + 2.0 * float(exterior.sum())

    def spread(self, x: np.ndarray) -> float:
        """Range of the node values and the far field at x."""
        values, far_field = self.assemble(x)
        return max(float(values.max()), far_field) - min(
            float(values.min()), far_field
        )

    def snap(self, x: np.ndarray, radius: float) -> np.ndarray:
        """Copy of x with the free values within radius of the far field set to it."""
        values, far_field = self.assemble(x)
        snapped = np.array(x, dtype=float)
        close = np.abs(values[self.free] - far_field) <= radius
        snapped[: self.free.size][close] = far_field
        return snapped

    def diagonal_metric(self) -> np.ndarray:
        """Diagonal preconditioner 2p (sum_j w_kj + e_k), far field sum_k e_k."""
        weights = self.weights
        row_sums = np.concatenate(
            [rows.sum(axis=1) for _, rows in weights.iter_row_blocks(self.free)]
            or [np.empty(0)]
        )
        diagonal = 2.0 * self.p * (row_sums + weights.exterior_at(self.free))
        if self.far_field_free:
            diagonal = np.append(
                diagonal, 2.0 * self.p * float(weights.exterior_weights.sum())
            )
        return diagonal

    def hessian(self, x: np.ndarray, floor: float) -> np.ndarray:
        """Hessian of the energy in the free variables, differences floored.

        |u_i - u_j|^(p-2) is evaluated at max(|u_i - u_j|, floor), which keeps the
        matrix finite and positive definite for p < 2.

        Args:
            x (np.ndarray): Point of the free variables.
            floor (float): Smallest difference entering the curvature weights.

        Returns:
            np.ndarray: Symmetric matrix of size dimension x dimension.
        """
        values, far_field = self.assemble(x)
        p = self.p
        scale = 2.0 * p * (p - 1.0)
        free = self.free
        coupling = np.empty((free.size, values.size))
        offset = 0
        for block, rows in self.weights.iter_row_blocks(free):
            gaps = np.maximum(np.abs(values[block, None] - values[None, :]), floor)
            coupling[offset : offset + block.size] = rows * gaps ** (p - 2.0)
            offset += block.size
        exterior = self.weights.exterior_at(free) * np.maximum(
            np.abs(values[free] - far_field), floor
        ) ** (p - 2.0)
        hessian = -coupling[:, free]
        hessian[np.diag_indices_from(hessian)] += coupling.sum(axis=1) + exterior
        hessian *= scale
        if not self.far_field_free:
            return hessian
        all_exterior = self.weights.exterior_weights * np.maximum(
            np.abs(values - far_field), floor
        ) ** (p - 2.0)
        size = free.size + 1
        bordered = np.zeros((size, size))
        bordered[:-1, :-1] = hessian
        bordered[:-1, -1] = bordered[-1, :-1] = -scale * exterior
        bordered[-1, -1] = scale * float(all_exterior.sum())
        return bordered

    def to_grid_function(self, x: np.ndarray) -> GridFunction:
        """The grid function described by x."""
        values, far_field = self.assemble(x)
        return GridFunction(self.weights.lattice, values, far_field)


def _power_change(before: np.ndarray, after: np.ndarray, p: float) -> np.ndarray:
    """|after|^p - |before|^p elementwise, accurate when the two are close."""
    start = np.abs(before)
    end = np.abs(after)
    step = end - start
    close = np.abs(step) < 0.5 * start
    ratio = np.divide(step, start, out=np.zeros_like(step), where=close)
    stable = start**p * np.expm1(p * np.log1p(ratio))
    return np.where(close, stable, end**p - start**p)
