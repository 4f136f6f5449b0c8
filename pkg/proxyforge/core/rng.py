"""Seeded random streams

Every stochastic component draws from a RandomStream derived from the
master seed and a tuple of integer keys, so that runs are reproducible and
parallel consumers never share a generator.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

Size = Optional[Union[int, Tuple[int, ...]]]


class RandomStream:
    """Deterministic random stream identified by (master_seed, keys)

    Wraps a numpy Generator. Child streams are derived through
    SeedSequence spawn keys, so identical key paths always produce the
    same draws regardless of the order in which streams are created.
    """

    def __init__(self, master_seed: int, keys: Sequence[int] = ()) -> None:
        """Initialize stream

        Args:
            master_seed: Non-negative master seed of the experiment
            keys: Path of integer keys identifying this stream
        """
        self.master_seed = int(master_seed)
        self.keys: Tuple[int, ...] = tuple(int(k) for k in keys)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.keys)
        self._generator = np.random.Generator(np.random.PCG64(seq))

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy Generator"""
        return self._generator

    def child(self, *keys: int) -> "RandomStream":
        """Derive an independent stream below this one

        Args:
            *keys: Integer keys appended to this stream's key path

        Returns:
            New RandomStream; its draws do not depend on this stream's state
        """
        return RandomStream(self.master_seed, self.keys + tuple(int(k) for k in keys))

    def draw_uniform(self, low: float = 0.0, high: float = 1.0, size: Size = None):
        """Uniform draws in [low, high)"""
        return self._generator.uniform(low, high, size)

    def draw_integers(self, low: int, high: int, size: Size = None):
        """Integer draws in [low, high)"""
        return self._generator.integers(low, high, size)

    def draw_seed(self) -> int:
        """Draw a 31-bit integer seed for a downstream consumer"""
        return int(self._generator.integers(0, 2**31 - 1))

    def coin(self, p: float = 0.5) -> bool:
        """Bernoulli draw with success probability p"""
        return bool(self._generator.random() < p)

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, keys={self.keys})"


def seeded_rng(master_seed: int, stream_id: int) -> RandomStream:
    """Create the stream `stream_id` of experiment `master_seed`

    Args:
        master_seed: Master seed of the experiment
        stream_id: Identifier of the independent stream

    Returns:
        RandomStream; identical (seed, stream) pairs reproduce identical draws
    """
    return RandomStream(master_seed, (stream_id,))
