from enum import StrEnum
from pathlib import Path
from typing import override

from configcore import Settings as CoreSettings
from logger import LogLevel
from pydantic import Field, model_validator

from adapters.infrastructure.config.contract import ConfigContract


class Verbosity(StrEnum):
    """Enum for the values of MORREY_LOG."""

    QUIET = "quiet"
    INFO = "info"
    DEBUG = "debug"


VERBOSITY_LEVELS: dict[Verbosity, LogLevel] = {
    Verbosity.QUIET: LogLevel.ERROR,
    Verbosity.INFO: LogLevel.INFO,
    Verbosity.DEBUG: LogLevel.DEBUG,
}


class Settings(CoreSettings, ConfigContract):
    """Process settings of the experiment runner.

    It extends CoreSettings and implements ConfigContract.
    """

    morrey_log: Verbosity = Field(
        default=Verbosity.INFO,
        description="Verbosity of the runner (quiet, info or debug)",
    )
    morrey_output_dir: Path = Field(
        default=Path("runs"),
        description="Default root directory of the written artifacts",
    )
    morrey_max_dense_nodes: int = Field(
        default=20_000,
        description=(
            "Largest number of lattice nodes for which dense matrices "
            "(Hessians, pair weight matrices) are assembled."
        ),
    )

    @override
    def get_verbosity(self) -> str:
        return self.morrey_log.value

    @override
    def get_cli_log_level(self) -> LogLevel:
        return VERBOSITY_LEVELS[self.morrey_log]

    @override
    def get_output_dir(self) -> Path:
        return self.morrey_output_dir

    @override
    def get_max_dense_nodes(self) -> int:
        return self.morrey_max_dense_nodes

    @model_validator(mode="after")
    def validate_max_dense_nodes(self) -> "Settings":
        """Validates that the dense node limit is positive.

        Raises:
            ValueError: If the limit is not positive.

        Returns:
            Settings: The validated settings instance.
        """
        if self.morrey_max_dense_nodes <= 0:
            raise ValueError(
                "morrey_max_dense_nodes must be positive, "
                f"got {self.morrey_max_dense_nodes}"
            )
        return self
