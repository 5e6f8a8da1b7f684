# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as the pure module for n <= 64."""

from libc.stdint cimport uint64_t

BACKEND = "cython"
MAX_VERTICES = 64


cdef uint64_t _span(uint64_t region, uint64_t seed, uint64_t* adj) nogil:
    cdef uint64_t reach = seed
    cdef uint64_t frontier = seed
    cdef uint64_t grow, f, low
    cdef int idx
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & (~f + 1)
            f ^= low
            idx = 0
            while not (low & 1):
                low >>= 1
                idx += 1
            grow |= adj[idx]
        grow &= region & ~reach
        reach |= grow
        frontier = grow
    return reach


cdef int _load_adj(object adj, uint64_t* buf) except -1:
    cdef int n = len(adj)
    cdef int i
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    for i in range(n):
        buf[i] = adj[i]
    return n


def is_connected_mask(mask, adj):
    cdef uint64_t buf[64]
    cdef int n = _load_adj(adj, buf)
    cdef uint64_t m = mask
    if m == 0:
        return True
    cdef uint64_t seed = m & (~m + 1)
    return _span(m, seed, buf) == m


def connected_subsets(adj, cap):
    cdef uint64_t buf[64]
    cdef int n = _load_adj(adj, buf)
    cdef long long limit = cap
    cdef uint64_t full = 0 if n == 0 else (<uint64_t>0xFFFFFFFFFFFFFFFF >> (64 - n))
    out = []

    # Explicit stack of (set mask, max vertex), preorder, lexicographic.
    cdef uint64_t smask_stack[4160]
    cdef int mx_stack[4160]
    cdef int top = 0
    cdef int v, w, mx
    cdef uint64_t smask, future, seed, reach
    for v in range(n - 1, -1, -1):
        smask_stack[top] = (<uint64_t>1) << v
        mx_stack[top] = v
        top += 1
    while top:
        top -= 1
        smask = smask_stack[top]
        mx = mx_stack[top]
        if mx + 1 >= n:
            future = 0
        else:
            future = full & ~(((<uint64_t>1) << (mx + 1)) - 1)
        seed = smask & (~smask + 1)
        reach = _span(smask | future, seed, buf)
        if smask & ~reach:
            continue
        if _span(smask, seed, buf) == smask:
            out.append(smask)
            if len(out) >= limit:
                return out
        for w in range(n - 1, mx, -1):
            smask_stack[top] = smask | ((<uint64_t>1) << w)
            mx_stack[top] = w
            top += 1
    return out
