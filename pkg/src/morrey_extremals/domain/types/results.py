from dataclasses import dataclass, field

import numpy as np

from domain.types.enums import FarFieldMode
from domain.types.grid_function import GridFunction
from domain.types.pins import PinSpec


@dataclass(frozen=True, eq=False)
class OptimizationOutcome:
    """Final state of an energy minimization.

    Attributes:
        x (np.ndarray): Final iterate in the objective's free variables.
        iterations (int): Iterations performed.
        grad_norm (float): Max-norm of the gradient at x.
        converged (bool): Whether grad_norm reached the tolerance.
        energy_history (tuple[float, ...]): Energy of every accepted iterate,
            starting with the initial one.
    """

    x: np.ndarray
    iterations: int
    grad_norm: float
    converged: bool
    energy_history: tuple[float, ...] = ()


@dataclass(frozen=True)
class ExtremalResult:
    """A converged discrete Morrey extremal.

    Attributes:
        u (GridFunction): The extremal, honoring the pins exactly.
        pins (PinSpec): The prescribed values.
        gagliardo (float): Discrete Gagliardo seminorm of u.
        holder (float): Discrete Hölder seminorm of u.
        c_star_hat (float): holder / gagliardo, the lattice sharp constant.
        iterations (int): Solver iterations.
        final_grad_norm (float): Projected-gradient max-norm at exit.
        holder_argpair (tuple[int, int]): Pair attaining the Hölder seminorm.
        far_field_mode (FarFieldMode): Whether the far field was optimized.
        energy_history (tuple[float, ...]): Energies of the accepted iterates.
    """

    u: GridFunction
    pins: PinSpec
    gagliardo: float
    holder: float
    c_star_hat: float
    iterations: int
    final_grad_norm: float
    holder_argpair: tuple[int, int] = (0, 1)
    far_field_mode: FarFieldMode = FarFieldMode.FIXED
    energy_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def attains_at_pins(self) -> bool:
        """Whether the Hölder seminorm is attained at the pinned pair."""
        return set(self.holder_argpair) == set(self.pins.nodes)


@dataclass(frozen=True, eq=False)
class DirichletOutcome:
    """Final state of a Dirichlet solve.

    Attributes:
        values (np.ndarray): Node values, constrained nodes equal to the data.
        iterations (int): Sweeps or iterations performed.
        grad_norm (float): Max-norm of the energy gradient over free nodes.
        converged (bool): Whether grad_norm reached the tolerance.
    """

    values: np.ndarray
    iterations: int
    grad_norm: float
    converged: bool
