import math
from dataclasses import dataclass

import numpy as np

from domain.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class ComplementData:
    """Dirichlet data prescribed on the complement of a lattice domain.

    Attributes:
        domain_mask (np.ndarray): True at the free nodes of the domain.
        g (np.ndarray): Prescribed value at every node; ignored on free nodes,
            where it is stored as 0.
        far_field (float): Prescribed value outside the truncation box.
    """

    domain_mask: np.ndarray
    g: np.ndarray
    far_field: float

    def __post_init__(self) -> None:
        """Validates and freezes the data.

        Raises:
            ValidationError: If the arrays disagree or no node is free/constrained.
        """
        mask = np.array(self.domain_mask, dtype=bool)
        values = np.array(self.g, dtype=float)
        if mask.ndim != 1 or values.shape != mask.shape:
            raise ValidationError("Mask and data must be one-dimensional and aligned")
        if not mask.any():
            raise ValidationError("Complement data needs at least one free node")
        if mask.all():
            raise ValidationError("Complement data needs at least one constrained node")
        if not np.all(np.isfinite(values[~mask])) or not math.isfinite(self.far_field):
            raise ValidationError("Complement values must be finite")
        values[mask] = 0.0
        mask.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "domain_mask", mask)
        object.__setattr__(self, "g", values)
        object.__setattr__(self, "far_field", float(self.far_field))

    @property
    def free_nodes(self) -> np.ndarray:
        """Indices of the free nodes."""
        return np.flatnonzero(self.domain_mask)

    @property
    def constrained_nodes(self) -> np.ndarray:
        """Indices of the constrained nodes."""
        return np.flatnonzero(~self.domain_mask)

    @property
    def bounds(self) -> tuple[float, float]:
        """Minimum and maximum of the data, far field included."""
        constrained = self.g[~self.domain_mask]
        return (
            min(float(constrained.min()), self.far_field),
            max(float(constrained.max()), self.far_field),
        )

    def negated(self) -> "ComplementData":
        """The data -g with the same domain."""
        return ComplementData(self.domain_mask, -self.g, -self.far_field)
