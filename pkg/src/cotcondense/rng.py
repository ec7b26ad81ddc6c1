"""Deterministic random primitives used for reproducible sampling.

The generator is SplitMix64 (Steele, Lea & Flood 2014; the same finalizer
used by Java's SplittableRandom), chosen because it is tiny, portable and
exactly specified, so index sets sampled here can be reproduced in any
language from the seed alone.

Documented procedures, fixed for all time:

* ``SplitMix64(seed)`` steps its 64-bit state by the golden-ratio constant
  0x9E3779B97F4A7C15 and finalizes with the mix64 function below.
* Bounded draws use rejection sampling (draw 64-bit words, reject those at
  or above ``2**64 - (2**64 % bound)``, return ``word % bound``) so every
  value in ``[0, bound)`` is exactly equally likely.
* ``sample_indices(n, k, seed)`` runs a partial Fisher-Yates shuffle over
  the array ``[1, ..., n]``: for ``i`` in ``0..k-1`` swap position ``i``
  with position ``i + below(n - i)``; the sample is the first ``k``
  entries, returned in ascending order.
* Per-record streams are derived as
  ``mix64((seed + mix64(index + 1)) mod 2**64)`` so records can be
  processed in any order or in parallel without changing results.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(value: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Derive the per-record seed for record ``index`` under ``seed``."""
    return mix64((seed + mix64(index + 1)) & _MASK64)


class SplitMix64:
    """SplitMix64 stream over a 64-bit state."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def below(self, bound: int) -> int:
        """Unbiased draw from ``[0, bound)`` via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            word = self.next_u64()
            if word < limit:
                return word % bound


def sample_indices(n: int, k: int, seed: int) -> tuple[int, ...]:
    """Sample ``k`` of the indices ``1..n`` without replacement, ascending.

    Partial Fisher-Yates shuffle driven by SplitMix64; fully determined by
    ``(seed, n, k)``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    arr = list(range(1, n + 1))
    rng = SplitMix64(seed)
    for i in range(k):
        j = i + rng.below(n - i)
        arr[i], arr[j] = arr[j], arr[i]
    return tuple(sorted(arr[:k]))
