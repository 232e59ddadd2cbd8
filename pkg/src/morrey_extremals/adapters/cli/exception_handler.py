from logger import LoggerContract

from adapters.exceptions import (
    AdapterError,
    ArtifactError,
    ConfigFileError,
    OptimizerError,
)
from domain.exceptions import (
    DegenerateError,
    DomainError,
    EmptyRegionError,
    GeometryError,
    MismatchError,
    NonConvergenceError,
    PreconditionError,
    ValidationError,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


class ExceptionHandler:
    """Maps exceptions raised by a command to process exit codes.

    Known exceptions are resolved along their MRO, so a subclass without an
    entry of its own inherits the code of its closest mapped base class.
    """

    def __init__(self, logger: LoggerContract) -> None:
        """Initialize the ExceptionHandler.

        Args:
            logger (LoggerContract): The logger instance for logging.
        """
        self.logger = logger
        self.error_mapping: dict[type[Exception], int] = {
            NonConvergenceError: EXIT_NOT_CONVERGED,
            ValidationError: EXIT_ERROR,
            GeometryError: EXIT_ERROR,
            MismatchError: EXIT_ERROR,
            EmptyRegionError: EXIT_ERROR,
            DegenerateError: EXIT_ERROR,
            PreconditionError: EXIT_ERROR,
            ConfigFileError: EXIT_ERROR,
            ArtifactError: EXIT_ERROR,
            OptimizerError: EXIT_ERROR,
            AdapterError: EXIT_ERROR,
            DomainError: EXIT_ERROR,
        }

    def exit_code(self, exc: Exception) -> int | None:
        """Exit code of a known exception, None for unknown ones."""
        for cls in type(exc).__mro__:
            if cls in self.error_mapping:
                return self.error_mapping[cls]
        return None

    def handle(self, exc: Exception) -> int:
        """Logs the exception and returns the exit code of the process.

        Args:
            exc (Exception): The exception that ended the command.

        Returns:
            int: 2 for non-convergence, 1 for every other failure.
        """
        code = self.exit_code(exc)
        if code is None:
            self.logger.exception("Unhandled internal error", exc, {})
            return EXIT_ERROR
        self.logger.exception(
            "Command failed",
            exc,
            {"exit_code": code, "error_type": type(exc).__name__, "detail": str(exc)},
        )
        return code
