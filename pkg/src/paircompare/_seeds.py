"""Deterministic seed derivation for resampling streams.

Every randomized operation takes a single 64-bit seed. Work is split into
fixed-size trial chunks and chunk ``c`` draws from the substream
``SeedSequence(seed, spawn_key=(*key, c))``, so results depend only on
(seed, chunk layout) and never on how chunks are scheduled. The chunk size
is a constant: changing it would change every seeded output.
"""
from __future__ import annotations

from collections.abc import Iterator

import numpy as np

from .errors import DataError

TRIAL_CHUNK = 1024
MAX_SEED = 2**64 - 1


def validate_seed(seed: int, name: str = "seed") -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise DataError(f"{name} must be an integer, got {seed!r}")
    if not 0 <= seed <= MAX_SEED:
        raise DataError(f"{name} must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by (seed, *key)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


# Derived seeds stay below 2**53 so they survive a JSON round trip through
# IEEE doubles (JavaScript clients parse JSON numbers as doubles).
DERIVED_SEED_BITS = 53


def spawn_seed(seed: int, *key: int) -> int:
    """Derive a child seed from (seed, *key), stable across runs."""
    state = np.random.SeedSequence(seed, spawn_key=key).generate_state(1, np.uint64)
    return int(state[0]) & ((1 << DERIVED_SEED_BITS) - 1)


def iter_chunks(total: int, chunk: int = TRIAL_CHUNK) -> Iterator[tuple[int, int]]:
    """Yield (chunk_index, chunk_length) pairs covering ``total`` trials."""
    index = 0
    done = 0
    while done < total:
        take = min(chunk, total - done)
        yield index, take
        index += 1
        done += take
