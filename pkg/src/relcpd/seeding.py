"""Deterministic seed derivation.

A single master seed expands into independent sub-seeds (per benchmark run,
per sliding position, per fit direction) by folding integer tags through the
splitmix64 finalizer.  The mixing is pure 64-bit integer arithmetic, so
serial and parallel execution derive identical streams.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def _finalize(x: int) -> int:
    # splitmix64 output function
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def mix_seed(seed: int, *tags: int) -> int:
    """Fold integer tags into ``seed``, returning a new 64-bit seed."""
    h = seed & _MASK
    for tag in tags:
        h = _finalize(h ^ (tag & _MASK))
    return h


def rng_from(seed: int) -> np.random.Generator:
    """PCG64 generator for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK))
