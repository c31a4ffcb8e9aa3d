"""Seeded random streams keyed by ``(seed, block index)``.

Trials are grouped in fixed-size blocks; each block draws from its own
generator, so any split of the work across processes reproduces the
serial result exactly.
"""
import numpy as np

BLOCK = 4096


def stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        key=np.array([int(seed) & (2**64 - 1), int(index)], dtype=np.uint64)
    ))


def blocks(seed: int, trials: int, block: int = BLOCK, family: int = 0):
    """Yield ``(first_trial, generator)`` for each block covering ``trials``.

    ``family`` separates independent sample families drawn under one seed.
    """
    for b, t0 in enumerate(range(0, trials, block)):
        yield t0, stream(seed, (family << 32) + b)
