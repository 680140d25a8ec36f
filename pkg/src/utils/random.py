"""Seeded random streams.

Every stochastic operation takes an explicit seed. Substreams are derived
from ``(seed, *keys)`` through ``numpy.random.SeedSequence`` so that a cell
of a parallel grid, or a single held-out individual, always sees the same
draws regardless of scheduling or ordering.
"""

import zlib

import numpy as np

from src.errors import ValidationError

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    """Validate a 64-bit unsigned seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValidationError(f"seed must be in [0, 2**64 - 1], got {seed}")
    return int(seed)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Return a PCG64 generator for the substream ``(seed, *keys)``."""
    entropy = [check_seed(seed), *(int(k) for k in keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child 64-bit seed for the substream ``(seed, *keys)``."""
    entropy = [check_seed(seed), *(int(k) for k in keys)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def stable_key(text: str) -> int:
    """Order-independent integer key for an identifier."""
    return zlib.crc32(text.encode("utf-8"))
