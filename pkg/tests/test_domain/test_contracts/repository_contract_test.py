"""Test module for ArtifactRepositoryContract."""

from abc import ABC

import pytest

from domain.contracts.repository import ArtifactRepositoryContract


class TestArtifactRepositoryContract:
    """Test class for ArtifactRepositoryContract."""

    def test_repository_contract_is_abstract(self) -> None:
        """Test that ArtifactRepositoryContract is abstract."""
        assert issubclass(ArtifactRepositoryContract, ABC)

        with pytest.raises(TypeError):
            ArtifactRepositoryContract()

    def test_repository_contract_abstract_methods(self) -> None:
        """Test that all artifact operations are abstract."""
        expected_methods = [
            "save_grid_function",
            "load_grid_function",
            "save_extremal",
            "load_extremal",
            "save_residual",
            "save_complement_data",
            "save_report",
            "save_table",
        ]

        abstract_methods = ArtifactRepositoryContract.__abstractmethods__

        for method in expected_methods:
            assert method in abstract_methods, f"Method {method} should be abstract"

    def test_incomplete_implementation(self) -> None:
        """Test that a partial implementation cannot be instantiated."""

        class IncompleteRepository(ArtifactRepositoryContract):
            def save_report(self, name: str, report: object) -> None:
                return None

        with pytest.raises(TypeError):
            IncompleteRepository()
