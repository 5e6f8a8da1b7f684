"""Structures: canonically ordered nested sequences of elements.

A structure is either a bare :class:`~pzlkit.grid.Element` (depth 0) or a
``Seq`` of structures.  Ordering follows three rules:

* same-kind elements compare by coordinates, different kinds by the chain
  p < c < hp < vp < hc < vc;
* a deeper nesting is always greater;
* equal-depth sequences compare lexicographically member by member.

Every ``Seq`` built through :func:`canonicalize` is sorted ascending at
every level, which is what makes set-style operations on sequences well
defined.
"""

from __future__ import annotations

import functools
from typing import Iterable, Union

from .errors import BudgetExceededError
from .grid import Element, ElementSet


class Seq:
    """An ordered sequence of structures.  Immutable and hashable."""

    __slots__ = ("members", "_hash")

    def __init__(self, members: Iterable["Structure"]):
        object.__setattr__(self, "members", tuple(members))
        object.__setattr__(self, "_hash", hash(("Seq", self.members)))

    def __setattr__(self, name, value):
        raise AttributeError("Seq is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Seq) and self.members == other.members

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self) -> str:
        return "(" + ", ".join(map(repr, self.members)) + ")"


Structure = Union[Element, Seq]


def is_element(s: Structure) -> bool:
    return isinstance(s, Element)


def depth(s: Structure) -> int:
    """Elements have depth 0; a sequence is one deeper than its deepest member."""
    if isinstance(s, Element):
        return 0
    if not s.members:
        return 1
    return 1 + max(depth(m) for m in s.members)


def compare(a: Structure, b: Structure) -> int:
    """Total order over structures: -1, 0 or 1."""
    da, db = depth(a), depth(b)
    if da != db:
        return -1 if da < db else 1
    if isinstance(a, Element):
        # depth 0 on both sides; Element tuples order canonically
        return -1 if a < b else (0 if a == b else 1)
    for ma, mb in zip(a.members, b.members):
        r = compare(ma, mb)
        if r != 0:
            return r
    la, lb = len(a.members), len(b.members)
    return -1 if la < lb else (0 if la == lb else 1)


sort_key = functools.cmp_to_key(compare)


def flatten(s) -> tuple[Element, ...]:
    """All leaf elements of a structure (or iterable of structures),
    deduplicated and canonically ordered."""
    out: set[Element] = set()

    def walk(node) -> None:
        if isinstance(node, Element):
            out.add(node)
        else:
            for m in node:
                walk(m)

    walk(s)
    return tuple(sorted(out))


def canonicalize(members: Iterable[Structure]) -> Seq:
    """Sort a sequence (recursively) into canonical ascending order.

    Idempotent; nested sequences are re-sorted at every level.
    """

    def norm(s: Structure) -> Structure:
        if isinstance(s, Element):
            return s
        return Seq(sorted((norm(m) for m in s.members), key=sort_key))

    return Seq(sorted((norm(m) for m in members), key=sort_key))


def power_seq(a: Structure, budget: int = 4096) -> tuple[Seq, ...]:
    """All subsequences of ``a``, canonically ordered (the empty one included).

    Explicit enumeration only: raises BudgetExceededError once more than
    ``budget`` subsequences would be produced.
    """
    members = (a,) if isinstance(a, Element) else a.members
    total = 1 << len(members)
    if total > budget:
        raise BudgetExceededError(
            f"power sequence has {total} members, over the budget of {budget}",
            count=total,
        )
    subsets = []
    for mask in range(total):
        subsets.append(Seq(members[i] for i in range(len(members)) if mask >> i & 1))
    subsets.sort(key=sort_key)
    return tuple(subsets)


def full_structure(es: ElementSet) -> Seq:
    """The whole element universe as one nested structure (P, Ep, C, Ec)."""
    return Seq((Seq(es.P), Seq(es.Ep), Seq(es.C), Seq(es.Ec)))
