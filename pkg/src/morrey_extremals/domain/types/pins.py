import math
from dataclasses import dataclass

from domain.exceptions import ValidationError
from domain.types.lattice import Lattice


@dataclass(frozen=True)
class PinSpec:
    """Two prescribed node values normalizing an extremal.

    Attributes:
        x0 (int): Node carrying the value a.
        y0 (int): Node carrying the value b.
        a (float): Value at x0.
        b (float): Value at y0.
    """

    x0: int
    y0: int
    a: float = 1.0
    b: float = -1.0

    def __post_init__(self) -> None:
        """Validates the pins.

        Raises:
            ValidationError: If the nodes or the values coincide.
        """
        if self.x0 == self.y0:
            raise ValidationError("Pinned nodes must be distinct")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValidationError("Pinned values must be finite")
        if self.a == self.b:
            raise ValidationError("Pinned values must differ")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def canonical(cls, lattice: Lattice, a: float = 1.0, b: float = -1.0) -> "PinSpec":
        """Pins at +e_n and -e_n."""
        x0, y0 = lattice.canonical_pins()
        return cls(x0, y0, a, b)

    @property
    def midpoint(self) -> float:
        """(a + b)/2, the far-field value of the extremal."""
        return (self.a + self.b) / 2.0

    @property
    def nodes(self) -> tuple[int, int]:
        """The pinned nodes (x0, y0)."""
        return self.x0, self.y0

    def is_canonical(self, lattice: Lattice) -> bool:
        """Whether the pins sit at (+e_n, -e_n) with a + b = 0."""
        return (self.x0, self.y0) == lattice.canonical_pins() and self.a == -self.b
