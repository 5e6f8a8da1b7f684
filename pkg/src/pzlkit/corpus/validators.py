"""Independent validators for the classic rules of the corpus puzzles.

Each validator re-states the published Nikoli rule directly over the cell
and edge values (plus the placed regions where the classic puzzle has
rooms), without going through the constraint evaluator.  They are the
cross-check that generated boards really are completed boards of the
actual puzzles.
"""

from __future__ import annotations

import math

from ..board import Assignment, Board, board_members
from ..errors import UnknownFamilyError
from ..structure import flatten
from ..values import MARK, NULL, is_int


def _dims(board: Board):
    return board.dims.m, board.dims.n


def _cells(board: Board, asg: Assignment) -> dict:
    return {(e.i, e.j): asg.value_of_element(e) for e in board.elements.C}


def _neighbors(i: int, j: int, m: int, n: int):
    for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        ii, jj = i + di, j + dj
        if 1 <= ii <= m and 1 <= jj <= n:
            yield (ii, jj)


def _components(cells: set, m: int, n: int) -> list:
    """Maximal orthogonally connected groups of the given cell coords."""
    todo = set(cells)
    out = []
    while todo:
        start = todo.pop()
        comp = {start}
        frontier = [start]
        while frontier:
            i, j = frontier.pop()
            for nb in _neighbors(i, j, m, n):
                if nb in todo:
                    todo.remove(nb)
                    comp.add(nb)
                    frontier.append(nb)
        out.append(comp)
    return out


def _is_rect(coords: set) -> bool:
    rows = [i for i, _ in coords]
    cols = [j for _, j in coords]
    return (max(rows) - min(rows) + 1) * (max(cols) - min(cols) + 1) == len(coords)


def _region_coords(board: Board, family: str) -> list:
    return [
        {(e.i, e.j) for e in flatten(inst)} for inst in board_members(board, family)
    ]


def _region_values(board: Board, asg: Assignment, family: str) -> list:
    return [
        asg.instance_value(family, idx)
        for idx in range(len(board_members(board, family)))
    ]


def _partitions_cells(regions: list, m: int, n: int) -> bool:
    seen: set = set()
    for coords in regions:
        if seen & coords:
            return False
        seen |= coords
    return seen == {(i, j) for i in range(1, m + 1) for j in range(1, n + 1)}


def validate_slitherlink(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    ones = []
    for e in board.elements.Ep:
        v = asg.value_of_element(e)
        if v not in (0, 1):
            return False
        if v == 1:
            ones.append(e)
    if not ones:
        return False
    # endpoints of an edge as point coordinates
    def endpoints(e):
        if e.kind.symbol == "hp":
            return ((e.i, e.j), (e.i, e.j + 1))
        return ((e.i, e.j), (e.i + 1, e.j))

    degree: dict = {}
    for e in ones:
        for pt in endpoints(e):
            degree[pt] = degree.get(pt, 0) + 1
    if any(d != 2 for d in degree.values()):
        return False
    # single loop: the 1-edges are connected through shared endpoints
    adj: dict = {}
    for e in ones:
        a, b = endpoints(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = next(iter(degree))
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    if seen != set(degree):
        return False
    # every cell counts its surrounding loop edges
    from ..grid import hp, vp

    onset = set(ones)
    for e in board.elements.C:
        want = asg.value_of_element(e)
        if not is_int(want):
            return False
        i, j = e.i, e.j
        got = sum(
            1
            for edge in (hp(i, j), hp(i + 1, j), vp(i, j), vp(i, j + 1))
            if edge in onset
        )
        if got != want:
            return False
    return True


def validate_sudoku(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    if m != n:
        return False
    k = math.isqrt(n)
    if k * k != n:
        return False
    grid = _cells(board, asg)
    if any(not is_int(v) or not 1 <= v <= n for v in grid.values()):
        return False
    for i in range(1, n + 1):
        if len({grid[(i, j)] for j in range(1, n + 1)}) != n:
            return False
    for j in range(1, n + 1):
        if len({grid[(i, j)] for i in range(1, n + 1)}) != n:
            return False
    for bi in range(k):
        for bj in range(k):
            vals = {
                grid[(bi * k + di + 1, bj * k + dj + 1)]
                for di in range(k)
                for dj in range(k)
            }
            if len(vals) != n:
                return False
    return True


def validate_shikaku(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    regions = _region_coords(board, "A")
    values = _region_values(board, asg, "A")
    if not _partitions_cells(regions, m, n):
        return False
    for coords, val in zip(regions, values):
        if not _is_rect(coords) or val != len(coords):
            return False
    return True


def validate_choco_banana(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    banana = _region_coords(board, "A1")  # non-rectangles
    choco = _region_coords(board, "A2")  # rectangles
    if not _partitions_cells(banana + choco, m, n):
        return False
    black = set().union(*choco) if choco else set()
    white = set().union(*banana) if banana else set()
    black_blocks = _components(black, m, n)
    white_blocks = _components(white, m, n)
    if any(not _is_rect(b) for b in black_blocks):
        return False
    if any(_is_rect(w) for w in white_blocks):
        return False
    # clue values equal region sizes, and placed regions are the maximal blocks
    if {frozenset(c) for c in choco} != {frozenset(b) for b in black_blocks}:
        return False
    if {frozenset(c) for c in banana} != {frozenset(w) for w in white_blocks}:
        return False
    for family, regions in (("A1", banana), ("A2", choco)):
        for idx, coords in enumerate(regions):
            if asg.instance_value(family, idx) != len(coords):
                return False
    return True


def validate_inshi_no_heya(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    if m != n:
        return False
    grid = _cells(board, asg)
    if any(not is_int(v) or not 1 <= v <= n for v in grid.values()):
        return False
    for i in range(1, n + 1):
        if len({grid[(i, j)] for j in range(1, n + 1)}) != n:
            return False
    for j in range(1, n + 1):
        if len({grid[(i, j)] for i in range(1, n + 1)}) != n:
            return False
    rooms = _region_coords(board, "A")
    values = _region_values(board, asg, "A")
    if not _partitions_cells(rooms, m, n):
        return False
    for coords, val in zip(rooms, values):
        if not _is_rect(coords):
            return False
        product = 1
        for c in coords:
            product *= grid[c]
        if val != product:
            return False
    return True


def validate_fillomino(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    grid = _cells(board, asg)
    if any(not is_int(v) or v < 1 for v in grid.values()):
        return False
    todo = set(grid)
    while todo:
        start = todo.pop()
        val = grid[start]
        comp = {start}
        frontier = [start]
        while frontier:
            i, j = frontier.pop()
            for nb in _neighbors(i, j, m, n):
                if nb in todo and grid[nb] == val:
                    todo.remove(nb)
                    comp.add(nb)
                    frontier.append(nb)
        if len(comp) != val:
            return False
    return True


def validate_kurotto(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    grid = _cells(board, asg)
    black = {c for c, v in grid.items() if v is MARK}
    blocks = _components(black, m, n)
    block_of = {}
    for idx, comp in enumerate(blocks):
        for c in comp:
            block_of[c] = idx
    for c, v in grid.items():
        if v is MARK or v is NULL:
            continue
        if not is_int(v):
            return False
        touched = {block_of[nb] for nb in _neighbors(*c, m, n) if nb in block_of}
        if v != sum(len(blocks[idx]) for idx in touched):
            return False
    return True


def validate_kurotto_literal(board: Board, asg: Assignment) -> bool:
    """Per-neighbour clue reading: a block touching a clue through two
    neighbours counts twice."""
    m, n = _dims(board)
    grid = _cells(board, asg)
    black = {c for c, v in grid.items() if v is MARK}
    blocks = _components(black, m, n)
    block_of = {}
    for idx, comp in enumerate(blocks):
        for c in comp:
            block_of[c] = idx
    for c, v in grid.items():
        if v is MARK or v is NULL:
            continue
        if not is_int(v):
            return False
        total = sum(
            len(blocks[block_of[nb]])
            for nb in _neighbors(*c, m, n)
            if nb in block_of
        )
        if v != total:
            return False
    return True


def validate_sukoro(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    grid = _cells(board, asg)
    numbered = {c for c, v in grid.items() if v is not NULL}
    if not numbered:
        return False
    if any(not is_int(grid[c]) or not 1 <= grid[c] <= 4 for c in numbered):
        return False
    if len(_components(numbered, m, n)) != 1:
        return False
    for c in numbered:
        count = sum(1 for nb in _neighbors(*c, m, n) if nb in numbered)
        if grid[c] != count:
            return False
        for nb in _neighbors(*c, m, n):
            if nb in numbered and grid[nb] == grid[c]:
                return False
    return True


def _domino_partition(black: set, m: int, n: int) -> bool:
    """Whether the black cells split into disjoint orthogonal dominoes."""
    if len(black) % 2:
        return False
    remaining = set(black)

    def rec() -> bool:
        if not remaining:
            return True
        c = min(remaining)
        remaining.remove(c)
        for nb in _neighbors(*c, m, n):
            if nb in remaining:
                remaining.remove(nb)
                if rec():
                    return True
                remaining.add(nb)
        remaining.add(c)
        return False

    return rec()


def validate_norinori(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    grid = _cells(board, asg)
    if any(v is not NULL and v is not MARK for v in grid.values()):
        return False
    black = {c for c, v in grid.items() if v is MARK}
    rooms = _region_coords(board, "A2")
    if not _partitions_cells(rooms, m, n):
        return False
    for coords in rooms:
        if len(coords & black) != 2:
            return False
    return _domino_partition(black, m, n)


def validate_hitori(board: Board, asg: Assignment) -> bool:
    m, n = _dims(board)
    if m != n:
        return False
    grid = _cells(board, asg)
    black = {c for c, v in grid.items() if v is MARK}
    white = {c for c, v in grid.items() if v is not MARK}
    for c, v in grid.items():
        if v is not MARK and (not is_int(v) or not 1 <= v <= n):
            return False
    for c in black:
        for nb in _neighbors(*c, m, n):
            if nb in black:
                return False
    if white and len(_components(white, m, n)) != 1:
        return False
    for i in range(1, n + 1):
        vals = [grid[(i, j)] for j in range(1, n + 1) if (i, j) in white]
        if len(vals) != len(set(vals)):
            return False
    for j in range(1, n + 1):
        vals = [grid[(i, j)] for i in range(1, n + 1) if (i, j) in white]
        if len(vals) != len(set(vals)):
            return False
    return True


VALIDATORS = {
    "slitherlink": validate_slitherlink,
    "sudoku": validate_sudoku,
    "shikaku": validate_shikaku,
    "choco_banana": validate_choco_banana,
    "inshi_no_heya": validate_inshi_no_heya,
    "fillomino": validate_fillomino,
    "kurotto": validate_kurotto,
    "kurotto_literal": validate_kurotto_literal,
    "sukoro": validate_sukoro,
    "norinori": validate_norinori,
    "hitori": validate_hitori,
}


def oracle_validate(name: str, board: Board, asg: Assignment) -> bool:
    """Classic-rules verdict for one corpus puzzle."""
    try:
        fn = VALIDATORS[name]
    except KeyError:
        raise UnknownFamilyError(f"no oracle validator for puzzle {name!r}") from None
    return fn(board, asg)
