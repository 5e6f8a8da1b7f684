"""Deterministic ASCII rendering of boards.

Glyphs (full table in docs/render.md): grid points are ``+``; a point edge
drawn ``-`` or ``|`` when its value is 1, blank otherwise; cells show
``.`` for null or undecided, ``#`` for the shading mark, digits for 0-9
and lowercase base-36 letters for larger values.
"""

from __future__ import annotations

from .board import Assignment, Board
from .grid import c, hp, vp
from .values import MARK, NULL, UNDECIDED, is_int

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def cell_glyph(v) -> str:
    if v is NULL or v is UNDECIDED:
        return "."
    if v is MARK:
        return "#"
    if is_int(v) and 0 <= v < len(_DIGITS):
        return _DIGITS[v]
    return "?"


def render(board: Board, asg: Assignment) -> str:
    """One text block: point rows and cell rows interleaved."""
    m, n = board.dims
    lines = []
    for i in range(1, m + 2):
        row = []
        for j in range(1, n + 1):
            row.append("+")
            row.append("-" if asg.value_of_element(hp(i, j)) == 1 else " ")
        row.append("+")
        lines.append("".join(row))
        if i > m:
            break
        row = []
        for j in range(1, n + 1):
            row.append("|" if asg.value_of_element(vp(i, j)) == 1 else " ")
            row.append(cell_glyph(asg.value_of_element(c(i, j))))
        row.append("|" if asg.value_of_element(vp(i, n + 1)) == 1 else " ")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"
