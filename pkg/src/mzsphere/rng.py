"""Deterministic substream randomness built on the counter-based Philox generator.

Every source of randomness in the package flows from one root seed through
named substreams.  A substream is addressed by the root seed plus a path of
integers, so results never depend on thread scheduling or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# substream namespaces (first path component)
NS_SAMPLE = 1
NS_EIG = 2
NS_POLY = 3
NS_COUPON = 4
NS_TRIAL = 5
NS_EXPERIMENT = 6


def philox_stream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the substream addressed by (seed, path)."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=tuple(int(p) & _MASK64 for p in path),
    )
    return np.random.Generator(np.random.Philox(seed=ss))


def derive_seed(seed: int, *path: int) -> int:
    """64-bit child seed for APIs that accept a plain integer seed."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=tuple(int(p) & _MASK64 for p in path),
    )
    return int(ss.generate_state(1, np.uint64)[0])
