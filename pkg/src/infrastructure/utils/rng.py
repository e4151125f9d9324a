"""Seeded random streams.

Every consumer derives its generator from ``(seed, purpose, *indices)`` so that
streams are independent of each other and of the order in which they are created.
"""

import zlib

import numpy as np


def make_rng(seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Create a counter-based generator for one (seed, purpose) stream.

    Args:
        seed: Root seed of the run.
        purpose: Stream name, e.g. ``"features"`` or ``"sigma"``.
        *indices: Extra non-negative integers (grid point, draw block, ...).

    Returns:
        A ``numpy.random.Generator`` over the Philox bit generator.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    spawn_key = (zlib.crc32(purpose.encode("utf-8")),) + tuple(int(i) for i in indices)
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(sequence))
