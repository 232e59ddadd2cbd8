from dataclasses import dataclass

from domain.exceptions import RegimeError, ValidationError

SUPPORTED_DIMENSIONS = (1, 2)


@dataclass(frozen=True)
class FracParams:
    """The triple (n, s, p) of a fractional Sobolev space in the Morrey regime.

    Attributes:
        n (int): Space dimension, 1 or 2.
        s (float): Fractional order in (0, 1).
        p (float): Integrability exponent in (1, inf).
    """

    n: int
    s: float
    p: float

    def __post_init__(self) -> None:
        """Validates the parameters.

        Raises:
            ValidationError: If a parameter is outside its range.
            RegimeError: If s*p <= n.
        """
        if self.n not in SUPPORTED_DIMENSIONS:
            raise ValidationError(f"Dimension must be 1 or 2, got {self.n}")
        if not 0.0 < self.s < 1.0:
            raise ValidationError(
                f"Fractional order s must lie in (0, 1), got {self.s}"
            )
        if not self.p > 1.0:
            raise ValidationError(f"Exponent p must exceed 1, got {self.p}")
        if self.s * self.p <= self.n:
            raise RegimeError(
                f"Parameters outside the Morrey regime: "
                f"s*p = {self.s * self.p:g} <= n = {self.n}"
            )
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "p", float(self.p))

    @property
    def alpha(self) -> float:
        """Hölder exponent s - n/p."""
        return self.s - self.n / self.p

    @property
    def kernel_exponent(self) -> float:
        """Exponent n + s*p of the Gagliardo kernel."""
        return self.n + self.s * self.p

    @property
    def excess(self) -> float:
        """The positive quantity s*p - n."""
        return self.s * self.p - self.n

    @property
    def barrier_exponent(self) -> float:
        """Homogeneity degree (s*p - n)/(p - 1) of the barrier function."""
        return self.excess / (self.p - 1.0)

    @property
    def scaling_exponent(self) -> float:
        """Exponent n/p - s of the seminorm-preserving dilation."""
        return self.n / self.p - self.s

    @property
    def conjugate(self) -> float:
        """Conjugate exponent p/(p - 1)."""
        return self.p / (self.p - 1.0)
