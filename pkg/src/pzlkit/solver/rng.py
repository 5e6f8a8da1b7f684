"""Deterministic 64-bit PRNG used by the randomized engine.

splitmix64: one 64-bit state advanced by a fixed odd constant, output
mixed by two xor-shift-multiply rounds.  Chosen over the stdlib generator
so that seeds produce identical streams on every platform and Python
version; the mixing constants are the reference ones.  ``derive`` forks an
independent stream per attempt index.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.next_u64() % n

    def choice(self, xs):
        return xs[self.randrange(len(xs))]

    def shuffle(self, xs: list) -> list:
        for i in range(len(xs) - 1, 0, -1):
            j = self.randrange(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
        return xs

    def chance(self, num: int, den: int) -> bool:
        return self.randrange(den) < num


def derive(seed: int, index: int) -> int:
    """A per-attempt seed: feed the pair through one splitmix step each."""
    g = SplitMix64(seed)
    a = g.next_u64()
    g2 = SplitMix64(a ^ (index * 0x9E3779B97F4A7C15 & _MASK))
    return g2.next_u64()
