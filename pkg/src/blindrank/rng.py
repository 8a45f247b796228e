"""Seeding helpers.

Every random routine accepts either an integer seed or a
``numpy.random.Generator``. Independent sub-streams are derived from a
master seed and a tuple of task indices through ``SeedSequence``, so the
draws for task ``(seed, i)`` do not depend on execution order.
"""
from __future__ import annotations

import numpy as np



def as_generator(rng=None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def substream(seed: int, *index: int) -> np.random.Generator:
    """Generator for the task identified by ``(seed, *index)``."""
    if any(int(i) < 0 for i in (seed, *index)):
        raise ValueError("seed and stream indices must be nonnegative")
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, index)]))
