"""Counter-based uniform draws.

Draw ``i`` of replication ``rep`` under ``master_seed`` is::

    key  = mix64(mix64(master_seed) + (rep + 1) * GAMMA)
    u    = (mix64(key + (i + 1) * GAMMA) >> 11) * 2**-53

where ``mix64`` is the SplitMix64 finaliser and all arithmetic is modulo
2**64.  That is, replication ``rep`` reads the SplitMix64 sequence seeded
with ``key``.  Because every draw is a pure function of
``(master_seed, rep, i)``, results do not depend on how replications are
split across workers.  This derivation is part of the public contract.
"""
from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniform_block(master_seed: int, rep_start: int, rep_stop: int, count: int) -> np.ndarray:
    """Draws ``0..count-1`` for replications ``rep_start..rep_stop-1``, shape (reps, count)."""
    base = mix64(np.array([master_seed & MASK], dtype=np.uint64))
    reps = np.arange(rep_start + 1, rep_stop + 1, dtype=np.uint64)
    draws = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = mix64(base + reps * GAMMA)
        z = mix64(keys[:, None] + draws[None, :] * GAMMA)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


class Stream:
    """Draws for one replication, handed out in order."""

    def __init__(self, master_seed: int, rep: int = 0):
        self.master_seed = master_seed
        self.rep = rep

    def uniforms(self, count: int) -> list:
        return uniform_block(self.master_seed, self.rep, self.rep + 1, count)[0].tolist()
