import zlib

import numpy as np

from domain.exceptions import ValidationError
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice

SEED_BOUND = 2**64


class RandomStreams:
    """Named, independent random streams derived from one 64-bit seed.

    Each name selects a counter-based Philox generator keyed by the seed and a
    CRC32 of the name, so adding a stream never shifts another one.
    """

    def __init__(self, seed: int) -> None:
        """Initialize the streams.

        Args:
            seed (int): Root seed in [0, 2^64).

        Raises:
            ValidationError: If the seed is out of range.
        """
        if not 0 <= seed < SEED_BOUND:
            raise ValidationError(f"Seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed

    def generator(self, name: str) -> np.random.Generator:
        """Fresh generator of the named stream."""
        sequence = np.random.SeedSequence(
            entropy=self.seed,
            spawn_key=(zlib.crc32(name.encode()),),
        )
        return np.random.Generator(np.random.Philox(sequence))


def random_grid_function(
    lattice: Lattice,
    rng: np.random.Generator,
    bumps: int = 3,
    noise: float = 0.0,
    far_field: float = 0.0,
) -> GridFunction:
    """Random smooth function made of Gaussian bumps, plus optional node noise.

    Args:
        lattice (Lattice): Target lattice.
        rng (np.random.Generator): Source of randomness.
        bumps (int): Number of Gaussian bumps.
        noise (float): Standard deviation of independent node noise.
        far_field (float): Value outside the box, also the bumps' baseline.

    Returns:
        GridFunction: A non-constant function.
    """
    coordinates = lattice.coordinates
    half = lattice.half_extent / 2.0
    values = np.full(lattice.node_count, far_field)
    for _ in range(max(bumps, 1)):
        center = rng.uniform(-half, half, size=lattice.n)
        width = rng.uniform(lattice.spacing, half)
        amplitude = rng.uniform(-1.0, 1.0)
        squared = np.sum((coordinates - center) ** 2, axis=1)
        values += amplitude * np.exp(-squared / (2.0 * width**2))
    if noise > 0:
        values += rng.normal(0.0, noise, size=lattice.node_count)
    return GridFunction(lattice, values, far_field)
