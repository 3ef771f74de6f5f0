"""Deterministic seed derivation for multi-trial experiments.

All randomness in the package flows from 64-bit integer seeds fed to
``numpy.random.default_rng``.  Parallel trials must not share a stream, so
trial ``k`` of an experiment with base seed ``s`` uses ``derive_seed(s, k)``:
the SplitMix64 finalizer applied to ``s XOR k``.  The derivation is pure
integer arithmetic, documented here so runs can be replayed exactly.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def derive_seed(base_seed: int, index: int) -> int:
    """Return the derived 64-bit seed for stream ``index`` under ``base_seed``.

    SplitMix64 finalizer on ``base_seed ^ index``; distinct indices under one
    base seed give distinct, well-mixed seeds.
    """
    if index < 0:
        raise ValueError("stream index must be non-negative")
    z = (int(base_seed) ^ int(index)) & _MASK
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return (z ^ (z >> 31)) & _MASK
