"""Random number streams for samplers and grid verification."""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator, None]


def make_generator(seed_or_rng: SeedLike = None) -> np.random.Generator:
    """
    Normalize a seed or generator into a ``numpy.random.Generator``.

    Args:
        seed_or_rng: Integer seed, an existing generator (returned as is), or
            None for fresh OS entropy.

    Returns:
        A numpy Generator.
    """
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if seed_or_rng is not None and not isinstance(seed_or_rng, (int, np.integer)):
        raise TypeError(f"seed must be an int, a Generator or None, got {type(seed_or_rng).__name__}")
    return np.random.default_rng(seed_or_rng)


class SeedStreams:
    """Independent per-cell streams derived from one master seed."""

    def __init__(self, master_seed: int = 42):
        """
        Initialize the stream factory.

        Args:
            master_seed: Seed every derived stream depends on
        """
        self.master_seed = int(master_seed)

    def sequence(self, cell_index: int) -> np.random.SeedSequence:
        """SeedSequence for grid cell ``cell_index``."""
        return np.random.SeedSequence([self.master_seed, int(cell_index)])

    def for_cell(self, cell_index: int) -> np.random.Generator:
        """
        Generator owned by one grid cell.

        The stream depends only on (master seed, cell index), so cells can run
        in any order or in separate processes.

        Args:
            cell_index: Position of the cell in the grid

        Returns:
            A fresh Generator
        """
        return np.random.default_rng(self.sequence(cell_index))

