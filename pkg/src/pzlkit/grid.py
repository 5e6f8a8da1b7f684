"""Grid geometry: dimensions, the six element kinds, and the element universe.

An m x n grid of cells carries six kinds of annotated objects ("elements"),
all 1-indexed from the top-left:

    p(i,j)   grid point                1 <= i <= m+1, 1 <= j <= n+1
    c(i,j)   cell                      1 <= i <= m,   1 <= j <= n
    hp(i,j)  point edge, horizontal    1 <= i <= m+1, 1 <= j <= n
    vp(i,j)  point edge, vertical      1 <= i <= m,   1 <= j <= n+1
    hc(i,j)  cell edge, horizontal     1 <= i <= m,   1 <= j <= n-1
    vc(i,j)  cell edge, vertical       1 <= i <= m-1, 1 <= j <= n

Elements of different kinds order as p < c < hp < vp < hc < vc; within a
kind they order by (i, j).  Out-of-range coordinates are representable (the
cross/cycle probes need them) but never appear in an ElementSet; use
``in_bounds`` to tell the two apart.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple


class Kind(enum.IntEnum):
    """Element kind, ordered by the cross-kind comparison chain."""

    P = 0
    C = 1
    HP = 2
    VP = 3
    HC = 4
    VC = 5

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = {Kind.P: "p", Kind.C: "c", Kind.HP: "hp", Kind.VP: "vp", Kind.HC: "hc", Kind.VC: "vc"}
_KIND_BY_SYMBOL = {s: k for k, s in _SYMBOLS.items()}


class GridDims(NamedTuple):
    """Grid size in cells: m rows, n columns.  Both must be >= 1."""

    m: int
    n: int

    def validate(self) -> "GridDims":
        if self.m < 1 or self.n < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.m}x{self.n}")
        return self


class Element(NamedTuple):
    """One annotated grid object.  Tuple order gives the canonical order."""

    kind: Kind
    i: int
    j: int

    @property
    def ident(self) -> str:
        return f"{self.kind.symbol}({self.i},{self.j})"

    def __repr__(self) -> str:
        return self.ident


def p(i: int, j: int) -> Element:
    return Element(Kind.P, i, j)


def c(i: int, j: int) -> Element:
    return Element(Kind.C, i, j)


def hp(i: int, j: int) -> Element:
    return Element(Kind.HP, i, j)


def vp(i: int, j: int) -> Element:
    return Element(Kind.VP, i, j)


def hc(i: int, j: int) -> Element:
    return Element(Kind.HC, i, j)


def vc(i: int, j: int) -> Element:
    return Element(Kind.VC, i, j)


_ID_RE = re.compile(r"^(p|c|hp|vp|hc|vc)\((-?\d+),(-?\d+)\)$")


def parse_element_id(text: str) -> Element:
    m = _ID_RE.match(text)
    if m is None:
        raise ValueError(f"not an element id: {text!r}")
    return Element(_KIND_BY_SYMBOL[m.group(1)], int(m.group(2)), int(m.group(3)))


def kind_ranges(kind: Kind, dims: GridDims) -> tuple[int, int]:
    """(max_i, max_j) for a kind on the given grid; minimum is always 1."""
    m, n = dims
    return {
        Kind.P: (m + 1, n + 1),
        Kind.C: (m, n),
        Kind.HP: (m + 1, n),
        Kind.VP: (m, n + 1),
        Kind.HC: (m, n - 1),
        Kind.VC: (m - 1, n),
    }[kind]


def in_bounds(e: Element, dims: GridDims) -> bool:
    mi, mj = kind_ranges(e.kind, dims)
    return 1 <= e.i <= mi and 1 <= e.j <= mj


def _enumerate_kind(kind: Kind, dims: GridDims) -> tuple[Element, ...]:
    mi, mj = kind_ranges(kind, dims)
    return tuple(Element(kind, i, j) for i in range(1, mi + 1) for j in range(1, mj + 1))


# Names of the element groups that carry solution values.  Hp/Vp and Hc/Vc
# share the Ep/Ec domains respectively.
BASE_GROUPS = ("P", "C", "Ep", "Ec")
BASE_FAMILIES = ("P", "C", "Ep", "Ec", "Hp", "Vp", "Hc", "Vc")


@dataclass(frozen=True)
class ElementSet:
    """Every element of a grid, each kind in canonical ascending order."""

    dims: GridDims
    P: tuple[Element, ...] = field(repr=False)
    C: tuple[Element, ...] = field(repr=False)
    Hp: tuple[Element, ...] = field(repr=False)
    Vp: tuple[Element, ...] = field(repr=False)
    Hc: tuple[Element, ...] = field(repr=False)
    Vc: tuple[Element, ...] = field(repr=False)

    @property
    def Ep(self) -> tuple[Element, ...]:
        return self.Hp + self.Vp

    @property
    def Ec(self) -> tuple[Element, ...]:
        return self.Hc + self.Vc

    def sequence(self, family: str) -> tuple[Element, ...]:
        """The element sequence for one of the eight base family names."""
        try:
            return getattr(self, family)
        except AttributeError:
            raise KeyError(f"unknown base family: {family}") from None

    def all_elements(self) -> tuple[Element, ...]:
        """Every element in canonical (cross-kind) order."""
        return self.P + self.C + self.Hp + self.Vp + self.Hc + self.Vc

    def group_of(self, e: Element) -> str:
        return {
            Kind.P: "P",
            Kind.C: "C",
            Kind.HP: "Ep",
            Kind.VP: "Ep",
            Kind.HC: "Ec",
            Kind.VC: "Ec",
        }[e.kind]

    def __contains__(self, e: Element) -> bool:
        return isinstance(e, Element) and in_bounds(e, self.dims)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.all_elements())


def build_elements(dims: GridDims) -> ElementSet:
    """Populate all six element sequences for a grid.

    Rejects non-positive dimensions.
    """
    dims = GridDims(*dims).validate()
    return ElementSet(
        dims=dims,
        P=_enumerate_kind(Kind.P, dims),
        C=_enumerate_kind(Kind.C, dims),
        Hp=_enumerate_kind(Kind.HP, dims),
        Vp=_enumerate_kind(Kind.VP, dims),
        Hc=_enumerate_kind(Kind.HC, dims),
        Vc=_enumerate_kind(Kind.VC, dims),
    )
