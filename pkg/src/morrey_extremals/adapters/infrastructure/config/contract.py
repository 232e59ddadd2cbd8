from abc import abstractmethod
from pathlib import Path

from configcore import ConfigContract as CoreConfigContract
from logger import LogLevel


class ConfigContract(CoreConfigContract):
    """Contract for process-wide settings of the experiment runner."""

    @abstractmethod
    def get_verbosity(self) -> str:
        """Verbosity requested through MORREY_LOG.

        Returns:
            str: One of 'quiet', 'info' or 'debug'.
        """
        raise NotImplementedError

    @abstractmethod
    def get_cli_log_level(self) -> LogLevel:
        """Log level matching the verbosity.

        Returns:
            LogLevel: ERROR for quiet, INFO for info and DEBUG for debug.
        """
        raise NotImplementedError

    @abstractmethod
    def get_output_dir(self) -> Path:
        """Default root directory of the artifacts.

        Returns:
            Path: The artifact root, used when a run does not name one.
        """
        raise NotImplementedError

    @abstractmethod
    def get_max_dense_nodes(self) -> int:
        """Largest node count for which dense N x N matrices are assembled.

        Returns:
            int: The node limit of the dense solvers.
        """
        raise NotImplementedError
