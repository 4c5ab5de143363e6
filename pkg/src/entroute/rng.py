"""Seeded, platform-independent pseudorandom streams.

Reproducibility across machines and processes is a hard requirement, so the
generator is implemented here from scratch instead of relying on library
internals that are free to change between versions.  The core is SplitMix64:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64        (golden-ratio step)
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output <- z XOR (z >> 31)

Floats are built from the top 53 bits of an output word, so every derived
draw (uniform, bounded int, shuffle) is an exact function of the seed.

Derived seeds use ``hash64``: starting from ``acc = 0``, each value ``v`` is
absorbed as ``acc = mix64((acc + 0x9E3779B97F4A7C15 + v) mod 2^64)`` where
``mix64`` is the finalizer above.  Any implementation of these two formulas
reproduces the full stream hierarchy.
"""

from __future__ import annotations

from .errors import InvalidParameterError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective mixing function."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def hash64(*values: int) -> int:
    """Combine integers into one 64-bit value; used for child-seed derivation."""
    acc = 0
    for v in values:
        acc = mix64((acc + _GOLDEN + (int(v) & _MASK64)) & _MASK64)
    return acc


class RngStream:
    """A SplitMix64 stream identified by its 64-bit seed.

    Substreams are derived from the seed alone (never from consumed state),
    so the layout of draws in one stream cannot perturb another.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._state = self.seed

    def substream(self, *keys: int) -> "RngStream":
        """Child stream with seed ``hash64(self.seed, *keys)``."""
        return RngStream(hash64(self.seed, *keys))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def randrange(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise InvalidParameterError(f"randrange bound must be positive, got {n}")
        # Largest multiple of n that fits in 64 bits; draws past it are biased.
        threshold = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            draw = self.next_u64()
            if draw < threshold:
                return draw % n

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], endpoints included."""
        if high < low:
            raise InvalidParameterError(f"empty range [{low}, {high}]")
        return low + self.randrange(high - low + 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, population: int, k: int) -> list[int]:
        """k distinct integers from range(population), order randomized."""
        if k > population:
            raise InvalidParameterError(
                f"cannot sample {k} distinct values from {population}"
            )
        pool = list(range(population))
        for i in range(k):
            j = i + self.randrange(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
