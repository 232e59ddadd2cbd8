import csv
import dataclasses
import json
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from pathlib import Path
from typing import Any, override

import numpy as np
from logger import LoggerContract

from adapters.exceptions import ArtifactReadError, ArtifactWriteError
from domain.contracts.repository import ArtifactRepositoryContract
from domain.exceptions import DomainError
from domain.services.grid import build_lattice
from domain.types.complement import ComplementData
from domain.types.enums import FarFieldMode
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.pins import PinSpec
from domain.types.residual import Residual
from domain.types.results import ExtremalResult

AXES = ("x", "y")


def to_jsonable(value: Any) -> Any:  # noqa: PLR0911
    """Converts reports, numpy scalars and containers into JSON-ready values."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            item.name: to_jsonable(getattr(value, item.name))
            for item in dataclasses.fields(value)
            if item.name not in {"lattice", "u"}
        }
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def dump_json(payload: Any) -> str:
    """Sorted-key JSON with exact float representations."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


class FileSystemArtifactRepository(ArtifactRepositoryContract):
    """Writes experiment artifacts as CSV and JSON files below one directory."""

    def __init__(self, root: Path, logger: LoggerContract) -> None:
        """Initialize the FileSystemArtifactRepository.

        Args:
            root (Path): Output directory, created on first write.
            logger (LoggerContract): The logger instance for logging.
        """
        self.root = Path(root)
        self.logger = logger

    def _path(self, name: str, suffix: str) -> Path:
        path = Path(name)
        if path.suffix in {".csv", ".json"}:
            path = path.with_suffix("")
        if not path.is_absolute() and path.parent == Path():
            path = self.root / path
        return path.with_name(path.name + suffix)

    def _write_text(self, path: Path, text: str) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            self.logger.exception(
                "Error writing artifact",
                context={"path": str(path), "error": str(e)},
                exc=e,
            )
            raise ArtifactWriteError(f"Failed to write '{path}': {e}") from e
        self.logger.debug("Artifact written", context={"path": str(path)})
        return path

    def _write_csv(
        self,
        path: Path,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
    ) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(
                    [
                        repr(float(cell)) if isinstance(cell, float) else cell
                        for cell in row
                    ]
                    for row in rows
                )
        except OSError as e:
            self.logger.exception(
                "Error writing artifact",
                context={"path": str(path), "error": str(e)},
                exc=e,
            )
            raise ArtifactWriteError(f"Failed to write '{path}': {e}") from e
        self.logger.debug(
            "Artifact written",
            context={"path": str(path), "rows": len(rows)},
        )
        return path

    @staticmethod
    def _metadata(u: GridFunction) -> dict[str, Any]:
        lattice = u.lattice
        return {
            "n": lattice.n,
            "s": lattice.params.s,
            "p": lattice.params.p,
            "L": lattice.half_extent,
            "h": lattice.spacing,
            "far_field": u.far_field,
        }

    @staticmethod
    def _node_rows(lattice: Lattice, *columns: np.ndarray) -> list[list[Any]]:
        return [
            [*(float(c) for c in point), *(column[i].item() for column in columns)]
            for i, point in enumerate(lattice.coordinates)
        ]

    @override
    def save_grid_function(self, name: str, u: GridFunction) -> Path:
        header = [*AXES[: u.lattice.n], "value"]
        path = self._write_csv(
            self._path(name, ".csv"),
            header,
            self._node_rows(u.lattice, u.values),
        )
        self._write_text(self._path(name, ".meta.json"), dump_json(self._metadata(u)))
        return path

    @override
    def load_grid_function(self, name: str) -> GridFunction:
        csv_path = self._path(name, ".csv")
        meta_path = self._path(name, ".meta.json")
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            params = FracParams(int(meta["n"]), float(meta["s"]), float(meta["p"]))
            lattice = build_lattice(params, float(meta["L"]), float(meta["h"]))
            with csv_path.open(encoding="utf-8", newline="") as handle:
                rows = list(csv.DictReader(handle))
            if len(rows) != lattice.node_count:
                raise ArtifactReadError(
                    f"'{csv_path}' has {len(rows)} rows, "
                    f"expected {lattice.node_count}"
                )
            points = np.array(
                [[float(row[axis]) for axis in AXES[: params.n]] for row in rows]
            )
            if not np.allclose(points, lattice.coordinates, rtol=0.0, atol=1e-9):
                raise ArtifactReadError(f"'{csv_path}' is not in lattice node order")
            values = np.array([float(row["value"]) for row in rows])
            u = GridFunction(lattice, values, float(meta["far_field"]))
        except ArtifactReadError:
            raise
        except (OSError, KeyError, ValueError, TypeError, DomainError) as e:
            self.logger.exception(
                "Error reading artifact",
                context={"path": str(csv_path), "error": str(e)},
                exc=e,
            )
            raise ArtifactReadError(f"Failed to read '{csv_path}': {e}") from e
        self.logger.debug(
            "Artifact read",
            context={"path": str(csv_path), "nodes": lattice.node_count},
        )
        return u

    @override
    def save_extremal(self, name: str, result: ExtremalResult) -> Path:
        self.save_grid_function(name, result.u)
        coordinates = result.u.lattice.coordinates
        summary = {
            **self._metadata(result.u),
            "pins": {
                "x0": result.pins.x0,
                "y0": result.pins.y0,
                "a": result.pins.a,
                "b": result.pins.b,
                "x0_point": coordinates[result.pins.x0],
                "y0_point": coordinates[result.pins.y0],
            },
            "gagliardo": result.gagliardo,
            "holder": result.holder,
            "c_star_hat": result.c_star_hat,
            "iterations": result.iterations,
            "final_grad_norm": result.final_grad_norm,
            "holder_argpair": result.holder_argpair,
            "attains_at_pins": result.attains_at_pins,
            "far_field_mode": result.far_field_mode,
        }
        return self._write_text(self._path(name, ".json"), dump_json(summary))

    @override
    def load_extremal(self, name: str) -> ExtremalResult:
        u = self.load_grid_function(name)
        json_path = self._path(name, ".json")
        try:
            summary = json.loads(json_path.read_text(encoding="utf-8"))
            pins = summary["pins"]
            first, second = summary["holder_argpair"]
            result = ExtremalResult(
                u=u,
                pins=PinSpec(
                    int(pins["x0"]),
                    int(pins["y0"]),
                    float(pins["a"]),
                    float(pins["b"]),
                ),
                gagliardo=float(summary["gagliardo"]),
                holder=float(summary["holder"]),
                c_star_hat=float(summary["c_star_hat"]),
                iterations=int(summary["iterations"]),
                final_grad_norm=float(summary["final_grad_norm"]),
                holder_argpair=(int(first), int(second)),
                far_field_mode=FarFieldMode(summary["far_field_mode"]),
            )
        except (OSError, KeyError, ValueError, TypeError, DomainError) as e:
            self.logger.exception(
                "Error reading artifact",
                context={"path": str(json_path), "error": str(e)},
                exc=e,
            )
            raise ArtifactReadError(f"Failed to read '{json_path}': {e}") from e
        return result

    @override
    def save_residual(self, name: str, residual: Residual) -> Path:
        header = ["node_index", *AXES[: residual.lattice.n], "residual"]
        path = self._write_csv(self._path(name, ".csv"), header, residual.to_rows())
        summary = {
            "max_abs": residual.max_abs,
            "mean_abs": residual.mean_abs,
            "max_relative": residual.max_relative,
            "nodes": int(residual.nodes.size),
            "pin_masses": residual.pin_masses,
        }
        self._write_text(self._path(name, ".summary.json"), dump_json(summary))
        return path

    @override
    def save_complement_data(
        self,
        name: str,
        lattice: Lattice,
        data: ComplementData,
    ) -> Path:
        header = [*AXES[: lattice.n], "value", "mask"]
        path = self._write_csv(
            self._path(name, ".csv"),
            header,
            self._node_rows(lattice, data.g, data.domain_mask.astype(int)),
        )
        meta = {
            "n": lattice.n,
            "s": lattice.params.s,
            "p": lattice.params.p,
            "L": lattice.half_extent,
            "h": lattice.spacing,
            "far_field": data.far_field,
        }
        self._write_text(self._path(name, ".meta.json"), dump_json(meta))
        return path

    @override
    def save_report(self, name: str, report: Mapping[str, Any] | object) -> Path:
        return self._write_text(self._path(name, ".json"), dump_json(report))

    @override
    def save_table(
        self,
        name: str,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
    ) -> Path:
        return self._write_csv(self._path(name, ".csv"), header, rows)
