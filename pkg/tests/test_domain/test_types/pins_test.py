"""Test module for PinSpec."""

import pytest

from domain.exceptions import ValidationError
from domain.types.lattice import Lattice
from domain.types.pins import PinSpec


class TestPinSpec:
    """Test class for PinSpec."""

    def test_canonical(self, lattice_1d: Lattice) -> None:
        """Test the canonical pins and their midpoint."""
        pins = PinSpec.canonical(lattice_1d)

        assert pins.nodes == (12, 4)
        assert pins.midpoint == 0.0
        assert pins.is_canonical(lattice_1d)

    def test_not_canonical(self, lattice_1d: Lattice) -> None:
        """Test that other nodes or values are not canonical."""
        assert not PinSpec(12, 4, 1.0, 0.0).is_canonical(lattice_1d)
        assert not PinSpec(11, 4, 1.0, -1.0).is_canonical(lattice_1d)
        assert PinSpec(12, 4, 3.0, 1.0).midpoint == 2.0

    @pytest.mark.parametrize(
        ("x0", "y0", "a", "b"),
        [
            (3, 3, 1.0, -1.0),
            (3, 4, 1.0, 1.0),
            (3, 4, float("nan"), -1.0),
            (3, 4, 1.0, float("inf")),
        ],
    )
    def test_invalid_pins(self, x0: int, y0: int, a: float, b: float) -> None:
        """Test that coinciding or non-finite pins are rejected."""
        with pytest.raises(ValidationError):
            PinSpec(x0, y0, a, b)
