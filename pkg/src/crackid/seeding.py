"""Deterministic derivation of independent random streams from one seed.

Repeated runs (events, noise realizations, sweep points) each get their own
generator so they can run in any order, or in parallel, and still reproduce
bit-identically. Substream seeds come from folding each index into the
master seed through a 64-bit finalising mix (the splitmix64 finaliser),
which decorrelates neighbouring indices.
"""

from __future__ import annotations

import numpy as np

__all__ = ["mix64", "derive_seed", "derive_rng"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """64-bit finalising mix with good avalanche behaviour."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(master: int, *indices: int) -> int:
    """Substream seed for the given index path under ``master``."""
    s = master & _MASK
    for i in indices:
        s = mix64((s + (int(i) + 1) * _GOLDEN) & _MASK)
    return s


def derive_rng(master: int, *indices: int) -> np.random.Generator:
    """Fresh generator for the given index path under ``master``."""
    return np.random.default_rng(derive_seed(master, *indices))
