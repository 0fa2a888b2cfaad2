#!/usr/bin/env python3
"""
Deterministic RNG streams: (seed, stream-index) -> independent Generator.
"""

import numpy as np

from utils.errors import InvalidArgumentError


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Build the generator for one worker stream.

    Args:
        seed: Non-negative experiment seed (u64)
        stream: Stream index (chunk index in parallel sampling)

    Returns:
        PCG64-backed Generator; identical (seed, stream) pairs give identical draws
    """
    if seed < 0 or stream < 0:
        raise InvalidArgumentError(
            f"Seed and stream must be non-negative, got seed={seed} stream={stream}"
        )
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(sequence))


def chunk_sizes(total: int, chunk_size: int) -> list:
    """Split total samples into fixed-size chunks; the last may be short."""
    if total < 0 or chunk_size < 1:
        raise InvalidArgumentError(f"Invalid chunking total={total} chunk_size={chunk_size}")
    sizes = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        sizes.append(total % chunk_size)
    return sizes
