"""Seeded randomness.

Every random draw in the package goes through a Philox generator so that a
64-bit seed fully determines a run. Sub-seeds for independent trials come from
``SeedSequence.spawn`` and are therefore independent of how trials are
scheduled.
"""
from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & SEED_MASK))


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Derive ``count`` independent 64-bit sub-seeds from ``seed``."""
    children = np.random.SeedSequence(int(seed) & SEED_MASK).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic sub-seed addressed by an integer path (e.g. level, leaf)."""
    ss = np.random.SeedSequence([int(seed) & SEED_MASK, *[int(p) for p in path]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
