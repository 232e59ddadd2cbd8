import math
from dataclasses import dataclass

from domain.exceptions import ValidationError
from domain.types.enums import TransformKind

QUARTER_TURNS = 4


@dataclass(frozen=True)
class RigidTransform:
    """A transformation leaving both seminorms invariant.

    Use the named constructors rather than filling the fields by hand; each
    kind only reads the fields it needs.

    Attributes:
        kind (TransformKind): Which transformation.
        constant (float): Added constant for ADD_CONSTANT.
        factor (float): Dilation factor for SCALE.
        shift (tuple[float, ...]): Translation vector for TRANSLATE.
        axis (int): Reflected axis for REFLECT_AXIS.
        turns (int): Number of quarter turns in the (x1, x2) plane for ROTATE90.
        permutation (tuple[int, ...]): Axis permutation for PERMUTE_AXES.
    """

    kind: TransformKind
    constant: float = 0.0
    factor: float = 1.0
    shift: tuple[float, ...] = ()
    axis: int = 0
    turns: int = 1
    permutation: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """Validates the kind-specific fields.

        Raises:
            ValidationError: If a field is invalid for the kind.
        """
        match self.kind:
            case TransformKind.ADD_CONSTANT if not math.isfinite(self.constant):
                raise ValidationError("Added constant must be finite")
            case TransformKind.SCALE if not (
                math.isfinite(self.factor) and self.factor > 0
            ):
                raise ValidationError(
                        f"Scale factor must be positive, got {self.factor}"
                    )
            case TransformKind.TRANSLATE if not self.shift:
                raise ValidationError("Translation needs a shift vector")
            case TransformKind.REFLECT_AXIS if self.axis < 0:
                raise ValidationError(f"Invalid reflection axis {self.axis}")
            case TransformKind.PERMUTE_AXES if sorted(self.permutation) != list(
                range(len(self.permutation))
            ) or not self.permutation:
                raise ValidationError(f"Invalid axis permutation {self.permutation}")
            case _:
                pass

    @classmethod
    def negate(cls) -> "RigidTransform":
        """u -> -u."""
        return cls(TransformKind.NEGATE)

    @classmethod
    def add_constant(cls, constant: float) -> "RigidTransform":
        """u -> u + c."""
        return cls(TransformKind.ADD_CONSTANT, constant=constant)

    @classmethod
    def scale(cls, factor: float) -> "RigidTransform":
        """u -> factor^(n/p - s) u(factor x)."""
        return cls(TransformKind.SCALE, factor=factor)

    @classmethod
    def translate(cls, shift: tuple[float, ...]) -> "RigidTransform":
        """u -> u(x + a)."""
        return cls(TransformKind.TRANSLATE, shift=tuple(float(a) for a in shift))

    @classmethod
    def reflect_axis(cls, axis: int) -> "RigidTransform":
        """u -> u(x with x_axis negated)."""
        return cls(TransformKind.REFLECT_AXIS, axis=axis)

    @classmethod
    def rotate90(cls, turns: int = 1) -> "RigidTransform":
        """u -> u(Ox) with O a rotation by turns quarter turns (n = 2 only)."""
        return cls(TransformKind.ROTATE90, turns=turns % QUARTER_TURNS)

    @classmethod
    def permute_axes(cls, permutation: tuple[int, ...]) -> "RigidTransform":
        """u -> u(x_sigma(1), ..., x_sigma(n))."""
        return cls(TransformKind.PERMUTE_AXES, permutation=tuple(permutation))

    def inverse(self) -> "RigidTransform":
        """The transform undoing this one."""
        match self.kind:
            case TransformKind.ADD_CONSTANT:
                return RigidTransform.add_constant(-self.constant)
            case TransformKind.SCALE:
                return RigidTransform.scale(1.0 / self.factor)
            case TransformKind.TRANSLATE:
                return RigidTransform.translate(tuple(-a for a in self.shift))
            case TransformKind.ROTATE90:
                return RigidTransform.rotate90(QUARTER_TURNS - self.turns)
            case TransformKind.PERMUTE_AXES:
                inverse = [0] * len(self.permutation)
                for position, target in enumerate(self.permutation):
                    inverse[target] = position
                return RigidTransform.permute_axes(tuple(inverse))
            case _:
                return self
