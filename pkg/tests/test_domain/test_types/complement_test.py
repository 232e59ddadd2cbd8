"""Test module for ComplementData."""

import numpy as np
import pytest

from domain.exceptions import ValidationError
from domain.types.complement import ComplementData


class TestComplementData:
    """Test class for ComplementData."""

    def test_free_values_are_zeroed(self) -> None:
        """Test that data on free nodes is discarded."""
        data = ComplementData(
            domain_mask=np.array([False, True, True, False]),
            g=np.array([2.0, 5.0, np.nan, -1.0]),
            far_field=0.5,
        )

        assert data.g.tolist() == [2.0, 0.0, 0.0, -1.0]
        assert data.free_nodes.tolist() == [1, 2]
        assert data.constrained_nodes.tolist() == [0, 3]
        assert data.bounds == (-1.0, 2.0)

    def test_negated(self) -> None:
        """Test the negated data."""
        data = ComplementData(np.array([True, False]), np.array([0.0, 3.0]), 1.0)
        negated = data.negated()

        assert negated.g.tolist() == [0.0, -3.0]
        assert negated.far_field == -1.0
        assert np.array_equal(negated.domain_mask, data.domain_mask)

    @pytest.mark.parametrize(
        ("mask", "g", "far_field"),
        [
            ([True, True], [0.0, 0.0], 0.0),
            ([False, False], [0.0, 0.0], 0.0),
            ([True, False], [0.0], 0.0),
            ([True, False], [0.0, np.inf], 0.0),
            ([True, False], [0.0, 1.0], np.nan),
        ],
    )
    def test_invalid_data(self, mask: list, g: list, far_field: float) -> None:
        """Test the structural validation."""
        with pytest.raises(ValidationError):
            ComplementData(np.array(mask), np.array(g), far_field)

    def test_arrays_are_read_only(self) -> None:
        """Test that the stored arrays are frozen."""
        data = ComplementData(np.array([True, False]), np.array([0.0, 3.0]), 1.0)

        with pytest.raises(ValueError, match="read-only"):
            data.g[1] = 0.0
