"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``PZL_PURE=1`` to force the pure backend (useful for benchmarking and
for debugging suspected kernel issues).  The compiled backend only handles
graphs of at most 64 vertices; larger inputs fall through to pure Python
transparently.
"""

from __future__ import annotations

import os

from . import pure

_compiled = None
if not os.environ.get("PZL_PURE"):
    try:
        from . import _ckern as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = _compiled.BACKEND if _compiled is not None else pure.BACKEND


def is_connected_mask(mask: int, adj) -> bool:
    if _compiled is not None and len(adj) <= 64:
        return _compiled.is_connected_mask(mask, adj)
    return pure.is_connected_mask(mask, adj)


def connected_subsets(adj, cap: int) -> list[int]:
    if _compiled is not None and len(adj) <= 64:
        return _compiled.connected_subsets(adj, cap)
    return pure.connected_subsets(adj, cap)


def backends():
    """The available kernel implementations, keyed by name."""
    out = {"pure": pure}
    if _compiled is not None:
        out[_compiled.BACKEND] = _compiled
    return out
