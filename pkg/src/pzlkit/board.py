"""Boards and board solutions.

A board is the full element universe of a grid plus, per combined family,
the instances currently placed on it.  An assignment gives every board
member exactly one value: elements are keyed directly, placed instances by
(family, index).  The member order everywhere (files, extension tests,
search) is: all elements in canonical order, then each combined family's
instances in declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import UnknownFamilyError
from .grid import BASE_FAMILIES, Element, ElementSet, GridDims, build_elements
from .structure import Seq, Structure
from .values import UNDECIDED, Value

MemberKey = Union[Element, tuple]  # Element | (family, index)


@dataclass(frozen=True)
class Board:
    dims: GridDims
    elements: ElementSet
    selected: dict  # family name -> tuple[Structure, ...]

    @classmethod
    def empty(cls, dims: GridDims, combined_names: Iterable[str]) -> "Board":
        dims = GridDims(*dims)
        return cls(dims, build_elements(dims), {name: () for name in combined_names})

    def with_selection(self, family: str, instances) -> "Board":
        if family not in self.selected:
            raise UnknownFamilyError(family)
        updated = dict(self.selected)
        updated[family] = tuple(instances)
        return Board(self.dims, self.elements, updated)

    def member_keys(self) -> tuple[MemberKey, ...]:
        keys: list[MemberKey] = list(self.elements.all_elements())
        for family, instances in self.selected.items():
            keys.extend((family, idx) for idx in range(len(instances)))
        return tuple(keys)


def board_members(board: Board, family: str) -> tuple[Structure, ...]:
    """The structures of one family present on the board: base families are
    always fully present, combined families contribute their selection."""
    if family in BASE_FAMILIES:
        return board.elements.sequence(family)
    try:
        return board.selected[family]
    except KeyError:
        raise UnknownFamilyError(family) from None


@dataclass(frozen=True)
class Assignment:
    """Values for every member of one board."""

    element_values: dict  # Element -> Value
    instance_values: dict = field(default_factory=dict)  # (family, idx) -> Value

    def value_of_element(self, e: Element) -> Value:
        return self.element_values[e]

    def instance_value(self, family: str, idx: int) -> Value:
        return self.instance_values[(family, idx)]

    def value_of(self, board: Board, key: MemberKey) -> Value:
        if isinstance(key, Element):
            return self.value_of_element(key)
        return self.instance_value(*key)

    def sequence(self, board: Board) -> tuple[Value, ...]:
        """All values in board member order (the board-solution sequence)."""
        return tuple(self.value_of(board, k) for k in board.member_keys())

    def replace(self, key: MemberKey, value: Value) -> "Assignment":
        if isinstance(key, Element):
            ev = dict(self.element_values)
            ev[key] = value
            return Assignment(ev, self.instance_values)
        iv = dict(self.instance_values)
        iv[key] = value
        return Assignment(self.element_values, iv)


def all_undecided(board: Board) -> Assignment:
    """The fully masked assignment for a board."""
    return Assignment(
        {e: UNDECIDED for e in board.elements.all_elements()},
        {
            (family, idx): UNDECIDED
            for family, instances in board.selected.items()
            for idx in range(len(instances))
        },
    )


@dataclass(frozen=True)
class CompletedBoard:
    """A board together with an assignment satisfying every rule constraint."""

    board: Board
    assignment: Assignment


def instance_lookup(board: Board) -> dict:
    """Map each placed instance to the (family, index) slots holding it."""
    out: dict = {}
    for family, instances in board.selected.items():
        for idx, inst in enumerate(instances):
            out.setdefault(inst, []).append((family, idx))
    return out
