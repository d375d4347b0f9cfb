"""Seed management: every source of randomness draws from a named sub-stream
of one root seed, so whole pipelines are reproducible from a single integer."""

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Independent generator for `name`, derived deterministically from `seed`."""
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))


def start_vector(seed: int, name: str, n: int) -> np.ndarray:
    """Deterministic dense start vector for iterative solvers."""
    return substream(seed, name).standard_normal(n)
