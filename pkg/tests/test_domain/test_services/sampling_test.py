"""Test module for the random streams and random grid functions."""

import numpy as np
import pytest

from domain.exceptions import ValidationError
from domain.services.sampling import RandomStreams, random_grid_function
from domain.types.lattice import Lattice


class TestRandomStreams:
    """Test class for RandomStreams."""

    def test_same_name_same_draws(self) -> None:
        """Test that a stream is reproducible."""
        first = RandomStreams(42).generator("morrey").uniform(size=5)
        second = RandomStreams(42).generator("morrey").uniform(size=5)

        assert np.array_equal(first, second)

    def test_streams_are_independent(self) -> None:
        """Test that names and seeds select different streams."""
        streams = RandomStreams(42)
        base = streams.generator("morrey").uniform(size=5)

        assert not np.array_equal(base, streams.generator("clarkson").uniform(size=5))
        other = RandomStreams(43).generator("morrey").uniform(size=5)
        assert not np.array_equal(base, other)

    def test_largest_seed(self) -> None:
        """Test that the full 64-bit range is accepted."""
        assert RandomStreams(2**64 - 1).seed == 2**64 - 1

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_invalid_seed(self, seed: int) -> None:
        """Test that seeds outside [0, 2^64) are rejected."""
        with pytest.raises(ValidationError):
            RandomStreams(seed)


class TestRandomGridFunction:
    """Test class for random_grid_function."""

    def test_reproducible_and_non_constant(self, lattice_2d: Lattice) -> None:
        """Test that equal generators give equal non-constant functions."""
        first = random_grid_function(lattice_2d, RandomStreams(1).generator("u"))
        second = random_grid_function(lattice_2d, RandomStreams(1).generator("u"))

        assert np.array_equal(first.values, second.values)
        assert not first.is_constant()
        assert first.far_field == 0.0

    def test_noise_and_baseline(self, lattice_1d: Lattice) -> None:
        """Test the far-field baseline and node noise."""
        rng = RandomStreams(1).generator("u")
        u = random_grid_function(lattice_1d, rng, bumps=1, noise=0.1, far_field=2.0)

        assert u.far_field == 2.0
        assert np.all(np.isfinite(u.values))
