"""The four positional relations H, V, D, M over elements and structures.

On elements each relation is a case table over kind pairs (anything not
listed is false).  On structures the relation lifts recursively: two
structures are related iff some pair of their members is.  The tables are
pairwise symmetric by construction, M is reflexive, and H/V/D are
irreflexive on elements.
"""

from __future__ import annotations

import enum

from .grid import Element, Kind
from .structure import Structure


class RelationKind(enum.Enum):
    H = "H"
    V = "V"
    D = "D"
    M = "M"

    def __repr__(self) -> str:
        return self.value


ALL_RELATIONS = frozenset(RelationKind)


def _h(x: Element, y: Element) -> bool:
    kx, ky = x.kind, y.kind
    di, dj = x.i - y.i, x.j - y.j
    if kx == ky and kx in (Kind.P, Kind.C, Kind.HP, Kind.HC):
        return di == 0 and abs(dj) == 1
    if (kx, ky) in ((Kind.P, Kind.HP), (Kind.C, Kind.HC)):
        return di == 0 and dj in (0, 1)
    if (kx, ky) in ((Kind.HP, Kind.P), (Kind.HC, Kind.C)):
        return di == 0 and dj in (0, -1)
    return False


def _v(x: Element, y: Element) -> bool:
    kx, ky = x.kind, y.kind
    di, dj = x.i - y.i, x.j - y.j
    if kx == ky and kx in (Kind.P, Kind.C, Kind.VP, Kind.VC):
        return abs(di) == 1 and dj == 0
    if (kx, ky) in ((Kind.P, Kind.VP), (Kind.C, Kind.VC)):
        return di in (0, 1) and dj == 0
    if (kx, ky) in ((Kind.VP, Kind.P), (Kind.VC, Kind.C)):
        return di in (0, -1) and dj == 0
    return False


def _d(x: Element, y: Element) -> bool:
    kx, ky = x.kind, y.kind
    di, dj = x.i - y.i, x.j - y.j
    if kx == ky and kx in (Kind.P, Kind.C):
        return abs(di) == 1 and abs(dj) == 1
    if (kx, ky) in ((Kind.HP, Kind.VP), (Kind.HC, Kind.VC)):
        return di in (0, 1) and dj in (0, -1)
    if (kx, ky) in ((Kind.VP, Kind.HP), (Kind.VC, Kind.HC)):
        return di in (0, -1) and dj in (0, 1)
    return False


_LEAF_TABLE = {
    RelationKind.H: _h,
    RelationKind.V: _v,
    RelationKind.D: _d,
    RelationKind.M: lambda x, y: x == y,
}


def relate(kind: RelationKind, x: Structure, y: Structure) -> bool:
    """True iff x and y stand in the relation; total over structures."""
    if not isinstance(x, Element):
        return any(relate(kind, m, y) for m in x.members)
    if not isinstance(y, Element):
        return any(relate(kind, x, m) for m in y.members)
    return _LEAF_TABLE[kind](x, y)


def related_any(kinds, x: Structure, y: Structure) -> bool:
    """True iff some relation in ``kinds`` holds between x and y."""
    return any(relate(k, x, y) for k in kinds)
