"""Test module for configuration settings."""

from pathlib import Path

import pytest
from logger import LogLevel
from pydantic import ValidationError
from pytest_mock import MockerFixture

from adapters.infrastructure.config.settings import Settings, Verbosity


class TestSettings:
    """Test class for Settings configuration."""

    def test_default_values(self, mocker: MockerFixture) -> None:
        """Test that Settings has correct default values."""
        mocker.patch.dict("os.environ", {}, clear=True)
        settings = Settings(_env_file=None)

        assert settings.get_verbosity() == "info"
        assert settings.get_cli_log_level() == LogLevel.INFO
        assert settings.get_output_dir() == Path("runs")
        assert settings.get_max_dense_nodes() == 20_000

    def test_environment_variables(self, mocker: MockerFixture) -> None:
        """Test Settings loading from environment variables."""
        mocker.patch.dict(
            "os.environ",
            {
                "MORREY_LOG": "debug",
                "MORREY_OUTPUT_DIR": "/tmp/morrey",
                "MORREY_MAX_DENSE_NODES": "512",
            },
            clear=True,
        )
        settings = Settings(_env_file=None)

        assert settings.morrey_log is Verbosity.DEBUG
        assert settings.get_output_dir() == Path("/tmp/morrey")
        assert settings.get_max_dense_nodes() == 512

    @pytest.mark.parametrize(
        ("verbosity", "level"),
        [
            ("quiet", LogLevel.ERROR),
            ("info", LogLevel.INFO),
            ("debug", LogLevel.DEBUG),
        ],
    )
    def test_verbosity_levels(self, verbosity: str, level: LogLevel) -> None:
        """Test the log level of every verbosity."""
        settings = Settings(morrey_log=verbosity)

        assert settings.get_verbosity() == verbosity
        assert settings.get_cli_log_level() == level

    def test_unknown_verbosity(self) -> None:
        """Test that an unknown verbosity is refused."""
        with pytest.raises(ValidationError):
            Settings(morrey_log="loud")

    @pytest.mark.parametrize("nodes", [0, -5])
    def test_max_dense_nodes_validation(self, nodes: int) -> None:
        """Test that a non-positive node limit is refused."""
        with pytest.raises(ValueError, match="morrey_max_dense_nodes"):
            Settings(morrey_max_dense_nodes=nodes)

    @pytest.mark.parametrize("nodes", ["4096", 4096, 4096.0])
    def test_max_dense_nodes_conversion(self, nodes: str | float) -> None:
        """Test that the node limit is converted to an integer."""
        settings = Settings(morrey_max_dense_nodes=nodes)

        assert isinstance(settings.get_max_dense_nodes(), int)
        assert settings.get_max_dense_nodes() == 4096
