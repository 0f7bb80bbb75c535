# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Seeded random streams.

Every random quantity in the package is drawn from a named substream of a
master seed. Streams are counter-based (Philox) and keyed by
``(seed, *keys)``, so drawing from one stream never shifts another and a
computation can be split across threads without changing its output.
"""

import zlib
from typing import Tuple, Union

import numpy as np

StreamKey = Union[str, int, float]


def _key_to_int(key: StreamKey) -> int:
    """Map a stream key to a stable non-negative integer."""
    if isinstance(key, bool):
        return int(key)
    if isinstance(key, int):
        if key < 0:
            raise ValueError(f"Stream keys must be non-negative integers, got {key}")
        return key
    # repr() keeps floats distinct (0.1 vs 0.10000000000000002); crc32 is stable across runs
    text = key if isinstance(key, str) else repr(float(key))
    return zlib.crc32(text.encode("utf-8"))


def _seed_sequence(seed: int, keys: Tuple[StreamKey, ...]) -> np.random.SeedSequence:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(_key_to_int(k) for k in keys))


def substream(seed: int, *keys: StreamKey) -> np.random.Generator:
    """
    Create the generator for a named substream.

    Args:
        seed: Master seed
        *keys: Stream path, e.g. ``("noise", "U_Y")``

    Returns:
        A Philox-backed numpy Generator
    """
    return np.random.Generator(np.random.Philox(_seed_sequence(seed, keys)))


def derive_seed(seed: int, *keys: StreamKey) -> int:
    """
    Derive a child seed from a master seed and a key path.

    Used for per-grid-point and per-repetition seeds, so refining a grid does
    not reshuffle the seeds of points that already existed.
    """
    return int(_seed_sequence(seed, keys).generate_state(1, dtype=np.uint64)[0])
