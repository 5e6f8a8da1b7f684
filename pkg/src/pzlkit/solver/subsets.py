"""Connected-subset utilities shared by the search engines.

All functions speak bitmasks over an index space whose adjacency is given
as neighbour masks (the same convention as the kernels).
"""

from __future__ import annotations

from typing import Iterator, Optional

from .rng import SplitMix64


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def connected_supersets(
    seed: int, allowed: int, adj: list[int], max_size: Optional[int] = None
) -> Iterator[int]:
    """Every connected set S with seed in S, S subset of allowed, |S| <=
    max_size, each exactly once.

    Standard extension-list enumeration: at each level the frontier
    vertices are tried in order, and a vertex skipped at some level is
    banned for the rest of that subtree.
    """
    seedbit = 1 << seed
    if not allowed & seedbit:
        return

    def rec(smask: int, ext: tuple, banned: int):
        yield smask
        if max_size is not None and smask.bit_count() >= max_size:
            return
        ext_mask = 0
        for v in ext:
            ext_mask |= 1 << v
        prefix = 0
        for i, v in enumerate(ext):
            vbit = 1 << v
            child_banned = banned | prefix
            fresh = adj[v] & allowed & ~(smask | vbit) & ~child_banned & ~ext_mask
            child_ext = ext[i + 1 :] + tuple(bits(fresh))
            yield from rec(smask | vbit, child_ext, child_banned)
            prefix |= vbit
    first = tuple(bits(adj[seed] & allowed & ~seedbit))
    yield from rec(seedbit, first, 0)


def is_connected_in(mask: int, adj: list[int]) -> bool:
    if mask == 0:
        return True
    seed = mask & -mask
    reach = seed
    frontier = seed
    while frontier:
        grow = 0
        for v in bits(frontier):
            grow |= adj[v]
        grow &= mask & ~reach
        reach |= grow
        frontier = grow
    return reach == mask


def sample_connected(
    seed: int, allowed: int, adj: list[int], size: int, rng: SplitMix64
) -> Optional[int]:
    """One uniformly-grown connected set of the requested size, or None if
    growth gets stuck."""
    smask = 1 << seed
    while smask.bit_count() < size:
        frontier = 0
        for v in bits(smask):
            frontier |= adj[v]
        frontier &= allowed & ~smask
        if not frontier:
            return None
        options = list(bits(frontier))
        smask |= 1 << rng.choice(options)
    return smask


def neighbors_of(mask: int, adj: list[int]) -> int:
    out = 0
    for v in bits(mask):
        out |= adj[v]
    return out & ~mask
