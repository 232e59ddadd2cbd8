"""Test module for adapter exceptions."""

import pytest

from adapters.exceptions import (
    AdapterError,
    ArtifactError,
    ArtifactReadError,
    ArtifactWriteError,
    ConfigFileError,
    OptimizerError,
)


class TestAdapterExceptions:
    """Test class for the adapter exception hierarchy."""

    @pytest.mark.parametrize(
        ("exc_type", "base"),
        [
            (ConfigFileError, AdapterError),
            (ArtifactError, AdapterError),
            (ArtifactReadError, ArtifactError),
            (ArtifactWriteError, ArtifactError),
            (OptimizerError, AdapterError),
        ],
    )
    def test_hierarchy(self, exc_type: type[Exception], base: type[Exception]) -> None:
        """Test that every adapter error derives from its base."""
        assert issubclass(exc_type, base)
        assert not issubclass(exc_type, ValueError)

    def test_message(self) -> None:
        """Test that the message is kept."""
        with pytest.raises(ArtifactReadError, match="cannot read 'u.csv'"):
            raise ArtifactReadError("cannot read 'u.csv'")
