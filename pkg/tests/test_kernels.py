"""Kernel twins: the compiled extension and the pure fallback must agree
exactly, and both must match brute force."""

import itertools
import random

import pytest

from pzlkit._kernels import BACKEND, backends, connected_subsets, is_connected_mask
from pzlkit._kernels import pure


def random_graph(rng, n):
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.4:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj


def brute_connected(mask, adj):
    verts = [i for i in range(len(adj)) if mask >> i & 1]
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for v in verts:
            if v not in seen and adj[u] >> v & 1:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(verts)


def test_dispatch_reports_backend():
    assert BACKEND in ("pure", "cython")
    assert "pure" in backends()


def test_is_connected_matches_brute_force():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 10)
        adj = random_graph(rng, n)
        mask = rng.randrange(1 << n)
        expected = brute_connected(mask, adj)
        for mod in backends().values():
            assert mod.is_connected_mask(mask, adj) == expected


def test_connected_subsets_backends_agree():
    rng = random.Random(6)
    for _ in range(120):
        n = rng.randint(1, 9)
        adj = random_graph(rng, n)
        results = {
            name: mod.connected_subsets(adj, 10_000)
            for name, mod in backends().items()
        }
        first = next(iter(results.values()))
        for got in results.values():
            assert got == first


def test_connected_subsets_lexicographic_order():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 8)
        adj = random_graph(rng, n)
        masks = pure.connected_subsets(adj, 10_000)
        tuples = [tuple(i for i in range(n) if m >> i & 1) for m in masks]
        assert tuples == sorted(tuples)
        assert len(set(masks)) == len(masks)


def test_connected_subsets_completeness():
    rng = random.Random(8)
    for _ in range(60):
        n = rng.randint(1, 8)
        adj = random_graph(rng, n)
        got = set(pure.connected_subsets(adj, 10_000))
        expected = {
            sum(1 << i for i in combo)
            for r in range(1, n + 1)
            for combo in itertools.combinations(range(n), r)
            if brute_connected(sum(1 << i for i in combo), adj)
        }
        assert got == expected


def test_cap_truncates():
    adj = [0b1110, 0b1101, 0b1011, 0b0111]  # K4
    full = pure.connected_subsets(adj, 1000)
    assert len(full) == 15
    assert pure.connected_subsets(adj, 5) == full[:5]
    for mod in backends().values():
        assert mod.connected_subsets(adj, 5) == full[:5]


def test_pure_handles_wide_graphs():
    # beyond the 64-vertex compiled limit; dispatch must fall back cleanly
    n = 70
    adj = [0] * n
    for i in range(n - 1):
        adj[i] |= 1 << (i + 1)
        adj[i + 1] |= 1 << i
    path_sets = connected_subsets(adj, 100_000)
    # contiguous runs of a path graph: n*(n+1)/2
    assert len(path_sets) == n * (n + 1) // 2
    assert is_connected_mask((1 << n) - 1, adj)
