"""Test module for the CLI command runner."""

import dataclasses
import json
from pathlib import Path
from typing import Any

import pytest
from logger import LoggerContract

from adapters.cli.commands import CommandRunner
from adapters.cli.exception_handler import EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK
from adapters.exceptions import ConfigFileError
from adapters.infrastructure.config.run_config import RunConfig, build_run_config
from adapters.infrastructure.storage.filesystem import FileSystemArtifactRepository
from domain.exceptions import NonConvergenceError
from domain.types.enums import Experiment
from domain.types.results import ExtremalResult

VERIFY_CHECKS = {
    "morrey_bound",
    "clarkson",
    "uniqueness",
    "rotational_symmetry",
    "anti_symmetry",
    "pointwise_bounds",
    "stability",
    "euler_lagrange",
    "barrier",
    "slit_decay",
    "limit_at_infinity",
    "half_space_sign",
}


@pytest.fixture
def small_config() -> RunConfig:
    """A run configuration sized for tests."""
    return build_run_config(
        [
            {
                "geometry.L": "2",
                "geometry.h": "0.25",
                "verify.morrey_samples": "5",
                "verify.clarkson_pairs": "5",
                "verify.stability_samples": "3",
                "perron.L": "1",
                "perron.h": "0.25",
                "perron.max_iter": "200",
                "barrier.coarse_L": "2",
                "barrier.fine_h": "0.125",
                "barrier.fine_L": "4",
                "barrier.r_min": "0.5",
                "barrier.r_max": "1",
                "rng_seed": "11",
            }
        ]
    )


def make_runner(
    config: RunConfig,
    root: Path,
    logger: LoggerContract,
    max_dense_nodes: int = 20_000,
) -> CommandRunner:
    """Runner writing below root."""
    return CommandRunner(
        config=config, logger=logger, root=root, max_dense_nodes=max_dense_nodes
    )


def read_json(path: Path) -> Any:
    """Parsed JSON file."""
    return json.loads(path.read_text(encoding="utf-8"))


class TestExtremalCommand:
    """Test class for the extremal command."""

    def test_writes_artifacts(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that the extremal, its residual and its history are written."""
        code = make_runner(small_config, tmp_path, mock_logger).run(
            Experiment.EXTREMAL
        )

        assert code == EXIT_OK
        for name in (
            "extremal.csv",
            "extremal.meta.json",
            "extremal.json",
            "euler_lagrange.csv",
            "euler_lagrange.summary.json",
            "energy_history.csv",
        ):
            assert (tmp_path / name).exists()
        summary = read_json(tmp_path / "extremal.json")
        assert summary["pins"]["x0_point"] == [1.0]
        assert summary["c_star_hat"] > 0

    def test_dense_limit(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that dense solvers refuse lattices above the node limit."""
        runner = make_runner(small_config, tmp_path, mock_logger, max_dense_nodes=10)

        with pytest.raises(ConfigFileError, match="dense limit"):
            runner.run(Experiment.EXTREMAL)

    def test_non_convergence(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that an exhausted budget propagates."""
        config = small_config.with_overrides(
            {"params.p": "3", "solver.max_iter": "1"}
        )

        with pytest.raises(NonConvergenceError):
            make_runner(config, tmp_path, mock_logger).run(Experiment.EXTREMAL)

    def test_pins_given_together(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that a single pin coordinate is refused."""
        config = small_config.with_overrides({"pins.x0": "0.5"})

        with pytest.raises(ConfigFileError, match="together"):
            make_runner(config, tmp_path, mock_logger).run(Experiment.EXTREMAL)


class TestVerifyCommand:
    """Test class for the verify command."""

    def test_report_and_determinism(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that every check is reported and a rerun gives the same bytes."""
        codes = [
            make_runner(small_config, tmp_path / name, mock_logger).run(
                Experiment.VERIFY
            )
            for name in ("first", "second")
        ]
        first = (tmp_path / "first" / "verify_report.json").read_bytes()
        second = (tmp_path / "second" / "verify_report.json").read_bytes()
        report = json.loads(first)

        assert set(report) == VERIFY_CHECKS
        assert first == second
        assert codes[0] == codes[1]
        assert codes[0] in {EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED}
        assert all(isinstance(entry["passed"], bool) for entry in report.values())
        for name in (
            "clarkson",
            "uniqueness",
            "anti_symmetry",
            "pointwise_bounds",
            "euler_lagrange",
            "half_space_sign",
        ):
            assert report[name]["passed"], name
        euler_lagrange = report["euler_lagrange"]
        assert euler_lagrange["attains_at_pins"]
        assert euler_lagrange["mass_gap"] <= 1e-6 * abs(
            euler_lagrange["pin_masses"]["at_x0"]
        )

    def test_unconverged_solve_still_reports(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that an exhausted solve fails its checks but spares the others."""
        config = small_config.with_overrides(
            {"params.p": "3", "solver.max_iter": "1"}
        )

        code = make_runner(config, tmp_path, mock_logger).run(Experiment.VERIFY)
        report = read_json(tmp_path / "verify_report.json")

        assert code == EXIT_NOT_CONVERGED
        assert set(report) == VERIFY_CHECKS
        for name in ("morrey_bound", "euler_lagrange", "half_space_sign"):
            assert not report[name]["passed"], name
            assert report[name]["not_converged"], name
            assert report[name]["error"].startswith("NonConvergenceError"), name
        assert "not_converged" not in report["clarkson"]

    def test_tampered_extremal(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
        canonical_extremal: ExtremalResult,
    ) -> None:
        """Test that a perturbed stored extremal fails the Euler-Lagrange check."""
        values = canonical_extremal.u.values.copy()
        values[10] += 1e-3
        tampered = dataclasses.replace(
            canonical_extremal, u=canonical_extremal.u.with_values(values)
        )
        stored = FileSystemArtifactRepository(tmp_path / "stored", mock_logger)
        stored.save_extremal("extremal", tampered)
        config = small_config.with_overrides(
            {"verify.extremal": str(tmp_path / "stored" / "extremal")}
        )

        code = make_runner(config, tmp_path / "run", mock_logger).run(
            Experiment.VERIFY
        )
        report = read_json(tmp_path / "run" / "verify_report.json")

        assert code == EXIT_ERROR
        assert not report["euler_lagrange"]["passed"]
        assert report["euler_lagrange"]["gradient_max"] > 1e-6


class TestSweepCommand:
    """Test class for the sweep command."""

    def test_failed_values_are_nan_rows(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that a failing value is recorded and the sweep continues."""
        config = small_config.with_overrides(
            {"sweep.axis": "s", "sweep.values": "0.9,0.4"}
        )

        code = make_runner(config, tmp_path, mock_logger).run(Experiment.SWEEP)
        header, good, bad = (
            (tmp_path / "sweep.csv").read_text(encoding="utf-8").splitlines()
        )
        report = read_json(tmp_path / "sweep_report.json")

        assert code == EXIT_ERROR
        assert header == "value,c_star_hat,gagliardo,holder,max_el_residual"
        assert good.startswith("0.9,")
        assert "nan" not in good
        assert bad == "0.4,nan,nan,nan,nan"
        assert list(report["failures"]) == ["0.4"]
        assert (tmp_path / "s_0.9" / "extremal.csv").exists()
        assert not (tmp_path / "s_0.4").exists()

    def test_empty_values(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that a sweep without values is a configuration error."""
        with pytest.raises(ConfigFileError, match="sweep.values"):
            make_runner(small_config, tmp_path, mock_logger).run(Experiment.SWEEP)


class TestPerronAndBarrierCommands:
    """Test class for the perron and barrier commands."""

    def test_perron(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that the slit artifacts and the report are written."""
        code = make_runner(small_config, tmp_path, mock_logger).run(
            Experiment.PERRON
        )
        report = read_json(tmp_path / "perron_report.json")

        assert code in {EXIT_OK, EXIT_ERROR}
        assert set(report) == {"slit", "barrier_bound"}
        assert report["slit"]["slit_max_abs"] == 0.0
        for name in ("slit_solution.csv", "slit_data.csv", "slit_rings.csv"):
            assert (tmp_path / name).exists()

    def test_barrier(
        self,
        tmp_path: Path,
        mock_logger: LoggerContract,
        small_config: RunConfig,
    ) -> None:
        """Test that the refinement report decides the exit code."""
        code = make_runner(small_config, tmp_path, mock_logger).run(
            Experiment.BARRIER
        )
        report = read_json(tmp_path / "barrier_report.json")

        assert code == (EXIT_OK if report["passed"] else EXIT_ERROR)
        assert report["coarse"] == [0.25, 2.0]
        assert report["fine"] == [0.125, 4.0]
