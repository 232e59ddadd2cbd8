class DomainError(Exception):
    """Base class for all domain-related errors."""


class ValidationError(DomainError):
    """Raised for data validation errors."""


class RegimeError(ValidationError):
    """Raised when the parameters leave the Morrey regime s*p > n."""


class GeometryError(DomainError):
    """Raised when a point, transform or lattice does not fit the lattice geometry."""


class MismatchError(DomainError):
    """Raised when objects built on different lattices are combined."""


class EmptyRegionError(DomainError):
    """Raised when a region contains no lattice node."""


class DegenerateError(DomainError):
    """Raised when a quantity is undefined for constant functions."""


class PreconditionError(DomainError):
    """Raised when the hypotheses of a check are not met by its inputs."""


class UnmappablePairError(PreconditionError):
    """Raised when a Hölder-attaining pair cannot be used as lattice pins."""


class NonConvergenceError(DomainError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, iterations: int, grad_norm: float) -> None:
        """Initialize the error with the solver state at exhaustion.

        Args:
            iterations (int): Number of iterations performed.
            grad_norm (float): Max-norm of the projected gradient at the last iterate.
        """
        super().__init__(
            f"Solver did not converge after {iterations} iterations "
            f"(gradient max-norm {grad_norm:.3e})"
        )
        self.iterations = iterations
        self.grad_norm = grad_norm
