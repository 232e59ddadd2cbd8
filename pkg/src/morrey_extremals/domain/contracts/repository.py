from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from domain.types.complement import ComplementData
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.residual import Residual
from domain.types.results import ExtremalResult


class ArtifactRepositoryContract(ABC):
    """Contract for persisting experiment artifacts."""

    @abstractmethod
    def save_grid_function(self, name: str, u: GridFunction) -> Path:
        """Writes a grid function as CSV plus its metadata sidecar.

        Args:
            name (str): Artifact base name.
            u (GridFunction): Function to store.

        Raises:
            ArtifactWriteError: If the files cannot be written.

        Returns:
            Path: Path of the CSV file.
        """
        raise NotImplementedError

    @abstractmethod
    def load_grid_function(self, name: str) -> GridFunction:
        """Reads a grid function written by save_grid_function.

        Args:
            name (str): Artifact base name or path of the CSV file.

        Raises:
            ArtifactReadError: If the files are missing or malformed.

        Returns:
            GridFunction: The stored function.
        """
        raise NotImplementedError

    @abstractmethod
    def save_extremal(self, name: str, result: ExtremalResult) -> Path:
        """Writes an extremal as CSV plus its JSON summary.

        Args:
            name (str): Artifact base name.
            result (ExtremalResult): The extremal.

        Raises:
            ArtifactWriteError: If the files cannot be written.

        Returns:
            Path: Path of the JSON summary.
        """
        raise NotImplementedError

    @abstractmethod
    def load_extremal(self, name: str) -> ExtremalResult:
        """Reads an extremal written by save_extremal.

        Args:
            name (str): Artifact base name or path of either file.

        Raises:
            ArtifactReadError: If the files are missing or malformed.

        Returns:
            ExtremalResult: The stored extremal.
        """
        raise NotImplementedError

    @abstractmethod
    def save_residual(self, name: str, residual: Residual) -> Path:
        """Writes a residual as CSV plus its JSON summary.

        Raises:
            ArtifactWriteError: If the files cannot be written.

        Returns:
            Path: Path of the CSV file.
        """
        raise NotImplementedError

    @abstractmethod
    def save_complement_data(
        self,
        name: str,
        lattice: Lattice,
        data: ComplementData,
    ) -> Path:
        """Writes complement data as the grid function CSV with a mask column.

        Raises:
            ArtifactWriteError: If the file cannot be written.

        Returns:
            Path: Path of the CSV file.
        """
        raise NotImplementedError

    @abstractmethod
    def save_report(self, name: str, report: Mapping[str, Any] | object) -> Path:
        """Writes a report, a mapping or a dataclass, as sorted-key JSON.

        Raises:
            ArtifactWriteError: If the file cannot be written.

        Returns:
            Path: Path of the JSON file.
        """
        raise NotImplementedError

    @abstractmethod
    def save_table(
        self,
        name: str,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
    ) -> Path:
        """Writes a CSV table.

        Raises:
            ArtifactWriteError: If the file cannot be written.

        Returns:
            Path: Path of the CSV file.
        """
        raise NotImplementedError
