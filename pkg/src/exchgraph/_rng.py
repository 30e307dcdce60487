"""Seeded, splittable random streams.

Every sampler takes an explicit ``numpy.random.Generator``. Child streams are
derived with ``Generator.spawn`` so that a draw for one purpose never shifts
the draws used for another; replicas get independent ``SeedSequence`` children.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("a seed is required; wall-clock seeding is not supported")
    return np.random.default_rng(seed)


def split(rng: np.random.Generator, k: int) -> list[np.random.Generator]:
    return rng.spawn(k)


def replica_seeds(seed, count: int) -> list[np.random.SeedSequence]:
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    return root.spawn(count)
