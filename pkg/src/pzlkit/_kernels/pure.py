"""Pure-Python kernels for the hot enumeration loops.

Vertex sets are bitmasks over arbitrary-width Python ints; ``adj[i]`` is the
neighbour mask of vertex i.  The compiled twin in ``_ckern`` implements the
same contract for graphs of up to 64 vertices.
"""

from __future__ import annotations

BACKEND = "pure"
MAX_VERTICES = None  # unbounded


def span(region: int, seed: int, adj) -> int:
    """All vertices reachable from ``seed`` walking inside ``region``."""
    reach = seed
    frontier = seed
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            f ^= low
            grow |= adj[low.bit_length() - 1]
        grow &= region & ~reach
        reach |= grow
        frontier = grow
    return reach


def is_connected_mask(mask: int, adj) -> bool:
    """Connectivity of the induced subgraph; empty and singleton are connected."""
    if mask == 0:
        return True
    seed = mask & -mask
    return span(mask, seed, adj) == mask


def connected_subsets(adj, cap: int) -> list[int]:
    """Masks of all nonempty connected induced subsets, in ascending
    lexicographic order of their sorted vertex tuples.

    Stops after ``cap`` results; callers that need to detect overflow ask
    for one more than they will accept.
    """
    n = len(adj)
    full = (1 << n) - 1
    out: list[int] = []

    # Iterative DFS in lexicographic preorder.  A branch is viable only if
    # the current set can still be joined up using vertices beyond its
    # maximum, so prune on connectivity within (set | future).
    stack = [(1 << v, v) for v in range(n - 1, -1, -1)]
    while stack:
        smask, mx = stack.pop()
        future = full & ~((1 << (mx + 1)) - 1)
        seed = smask & -smask
        reach = span(smask | future, seed, adj)
        if smask & ~reach:
            continue
        if span(smask, seed, adj) == smask:
            out.append(smask)
            if len(out) >= cap:
                return out
        for w in range(n - 1, mx, -1):
            stack.append((smask | (1 << w), w))
    return out
