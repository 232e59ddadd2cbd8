"""Test module for the command-line entry point."""

from pathlib import Path
from unittest.mock import Mock

import pytest
from pytest_mock import MockerFixture

from adapters.cli.exception_handler import EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK
from adapters.cli.main import build_parser, main, parse_overrides
from adapters.exceptions import ConfigFileError

SMALL = ["--geometry.L=2", "--geometry.h", "0.25"]


@pytest.fixture
def logger(mocker: MockerFixture) -> Mock:
    """Logger returned by the patched LoguruLogger."""
    mocker.patch.dict("os.environ", {}, clear=True)
    instance = mocker.Mock()
    mocker.patch("adapters.cli.main.LoguruLogger", return_value=instance)
    return instance


class TestParseOverrides:
    """Test class for parse_overrides."""

    def test_both_forms(self) -> None:
        """Test '--key=value' and '--key value' tokens."""
        assert parse_overrides(["--params.s=0.7", "--solver.tol", "1e-9"]) == {
            "params.s": "0.7",
            "solver.tol": "1e-9",
        }

    @pytest.mark.parametrize("tokens", [["stray"], ["--"], ["--params.s"]])
    def test_invalid_tokens(self, tokens: list[str]) -> None:
        """Test that positional tokens and missing values are refused."""
        with pytest.raises(ConfigFileError):
            parse_overrides(tokens)


class TestBuildParser:
    """Test class for build_parser."""

    def test_subcommand_flags(self) -> None:
        """Test the flags specific to verify and sweep."""
        args, extra = build_parser().parse_known_args(
            ["sweep", "--axis", "p", "--values", "2,3", "--seed", "4"]
        )

        assert args.command == "sweep"
        assert args.axis == "p"
        assert args.values == "2,3"
        assert args.seed == 4
        assert extra == []

    def test_unknown_command(self) -> None:
        """Test that usage errors become configuration errors."""
        with pytest.raises(ConfigFileError, match="morrey"):
            build_parser().parse_known_args(["solve"])


class TestMain:
    """Test class for main."""

    def test_extremal(self, tmp_path: Path, logger: Mock) -> None:
        """Test that a successful run exits with 0 and writes its artifacts."""
        code = main(["extremal", "--out", str(tmp_path), *SMALL])

        assert code == EXIT_OK
        assert (tmp_path / "extremal.csv").exists()
        assert (tmp_path / "euler_lagrange.csv").exists()
        logger.info.assert_any_call("Command finished", {"exit_code": EXIT_OK})

    def test_config_file(self, tmp_path: Path, logger: Mock) -> None:
        """Test that a configuration file is read and flags override it."""
        config = tmp_path / "run.cfg"
        config.write_text(
            "geometry.L = 2\ngeometry.h = 0.5\noutput_dir = unused\n", encoding="utf-8"
        )

        code = main(
            ["extremal", "--config", str(config), "--out", str(tmp_path / "out")]
        )

        assert code == EXIT_OK
        assert (tmp_path / "out" / "extremal.csv").exists()
        assert not (tmp_path / "unused").exists()

    def test_regime_error(self, tmp_path: Path, logger: Mock) -> None:
        """Test that s*p <= n exits with 1."""
        code = main(["extremal", "--out", str(tmp_path), *SMALL, "--params.s=0.4"])

        assert code == EXIT_ERROR
        logger.exception.assert_called_once()
        assert "regime" in logger.exception.call_args.args[2]["detail"]

    def test_non_convergence(self, tmp_path: Path, logger: Mock) -> None:
        """Test that an exhausted budget exits with 2."""
        code = main(
            [
                "extremal",
                "--out",
                str(tmp_path),
                *SMALL,
                "--params.p=3",
                "--solver.max_iter=1",
            ]
        )

        assert code == EXIT_NOT_CONVERGED

    @pytest.mark.parametrize(
        "argv",
        [
            ["extremal", "stray"],
            ["solve"],
            [],
            ["extremal", "--solver.speed=fast"],
            ["extremal", "--config", "/nonexistent/run.cfg"],
        ],
    )
    def test_usage_errors(self, logger: Mock, argv: list[str]) -> None:
        """Test that usage and configuration errors exit with 1."""
        assert main(argv) == EXIT_ERROR

    def test_invalid_settings(self, mocker: MockerFixture, logger: Mock) -> None:
        """Test that invalid process settings exit with 1 before any command."""
        mocker.patch.dict("os.environ", {"MORREY_LOG": "loud"})

        assert main(["extremal"]) == EXIT_ERROR
        logger.exception.assert_called_once()
