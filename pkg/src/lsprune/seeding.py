"""Deterministic sub-seed derivation.

Every stochastic component in this package derives its generator seed from a
single master seed plus one or more stream indices, so results never depend on
call order or ambient entropy.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_seed(master_seed: int, *indices: int) -> int:
    """Derive a 64-bit sub-seed from a master seed and stream indices.

    Applies the SplitMix64 finalizer once per index, advancing the state by
    the golden-ratio increment scaled by (index + 1) beforehand.  The result
    is a pure function of its arguments, so regenerating any component from
    the same (master_seed, indices) yields identical parameters.
    """
    x = master_seed & _MASK64
    for idx in indices:
        x = (x + ((idx & _MASK64) + 1) * _GOLDEN) & _MASK64
        x ^= x >> 30
        x = (x * 0xBF58476D1CE4E5B9) & _MASK64
        x ^= x >> 27
        x = (x * 0x94D049BB133111EB) & _MASK64
        x ^= x >> 31
    return x
