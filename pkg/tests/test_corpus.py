"""Corpus-wide checks: every entry parses cleanly, generates boards that
the independent classic-rules oracle accepts, and (where exhaustive
enumeration is feasible) every engine-accepted board is oracle-accepted.

Frozen small-grid counts are hand-derived in the comments next to each.
"""

import pytest

from pzlkit.corpus import ENTRIES, load_rule, oracle_validate, table_entries
from pzlkit.dsl import serialize_rule, parse_rule, static_check
from pzlkit.grid import GridDims
from pzlkit.solver import SearchConfig, enumerate_completed, generate_completed

DOCUMENTED_WARNINGS = {"hitori": ["unmaskable-family"]}


def test_table_has_ten_entries():
    names = {e.name for e in table_entries()}
    assert names == {
        "choco_banana",
        "kurotto",
        "fillomino",
        "inshi_no_heya",
        "hitori",
        "sudoku",
        "sukoro",
        "norinori",
        "shikaku",
        "slitherlink",
    }


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_entry_parses_and_checks(name):
    entry = ENTRIES[name]
    rule = entry.load()
    assert rule.name == name
    assert parse_rule(serialize_rule(rule)) == rule
    codes = [d.code for d in static_check(rule)]
    assert codes == DOCUMENTED_WARNINGS.get(name, [])


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_generated_boards_pass_oracle(name):
    entry = ENTRIES[name]
    rule = entry.load()
    result = generate_completed(
        rule,
        SearchConfig(dims=entry.desk_dims, engine="constructive", seed=13, limit=3),
    )
    assert len(result.boards) == 3, f"{name} generated {len(result.boards)}"
    for cb in result.boards:
        assert oracle_validate(name, cb.board, cb.assignment)


# hand-derived exhaustive counts on tiny grids:
#  - shikaku 2x2: rectangle partitions of a 2x2 box: whole square, two
#    horizontal dominoes, two vertical, one domino + two singles (4 ways),
#    four singles = 8.
#  - fillomino 2x2: {4} as one region (1) and {3,1} in four rotations; the
#    {2,2}, {2,1,1} and {1,1,1,1} splits put equal sizes side by side = 5.
#  - choco_banana 2x2: all-black square (1) plus L-tromino white with a
#    single black corner cell (4) = 5.
#  - sukoro 2x2: the only valid shapes are L-triominoes valued 1,2,1 = 4.
#  - norinori 2x2: one room holding any of the 4 dominoes, or two domino
#    rooms (2 layouts) each fully shaded with 2 domino splits = 8.
#  - kurotto 2x2: over every black subset, each remaining cell is null or
#    the forced sum: 16+32+16+8+8+1 = 81; the per-neighbour variant loses
#    the four L-block boards whose doubled clue 6 leaves the domain = 77.
EXPECTED_TINY_COUNTS = {
    "shikaku": (GridDims(2, 2), 8),
    "fillomino": (GridDims(2, 2), 5),
    "choco_banana": (GridDims(2, 2), 5),
    "sukoro": (GridDims(2, 2), 4),
    "norinori": (GridDims(2, 2), 8),
    "kurotto": (GridDims(2, 2), 81),
    "kurotto_literal": (GridDims(2, 2), 77),
}


@pytest.mark.parametrize("name", sorted(EXPECTED_TINY_COUNTS))
def test_tiny_exhaustive_counts(name):
    dims, expected = EXPECTED_TINY_COUNTS[name]
    boards = list(enumerate_completed(load_rule(name), SearchConfig(dims=dims)))
    assert len(boards) == expected


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_exhaustive_sufficiency(name):
    """Every board the evaluator accepts passes the classic oracle."""
    entry = ENTRIES[name]
    if entry.exhaustive_dims is None:
        pytest.skip("no exhaustive dims for this entry")
    dims = entry.exhaustive_dims
    if dims.m * dims.n > 9:
        dims = GridDims(2, 2) if name != "sudoku" else dims
    rule = entry.load()
    boards = list(
        enumerate_completed(rule, SearchConfig(dims=dims, node_budget=3_000_000))
    )
    assert boards, f"{name} has no completed boards at {dims}"
    for cb in boards:
        assert oracle_validate(name, cb.board, cb.assignment), (
            f"{name}: evaluator-accepted board fails the classic oracle"
        )


def test_notes_files_exist():
    for entry in ENTRIES.values():
        notes = entry.path.with_name(f"{entry.name}.notes.md")
        assert notes.is_file(), f"missing {notes}"


def test_oracle_rejects_bad_sudoku():
    rule = load_rule("sudoku")
    cb = next(iter(enumerate_completed(rule, SearchConfig(dims=GridDims(4, 4), limit=1))))
    cells = cb.board.elements.C
    bad = cb.assignment.replace(cells[0], cb.assignment.value_of_element(cells[1]))
    assert not oracle_validate("sudoku", cb.board, bad)


def test_oracle_accepts_worked_loop():
    from pzlkit.board import Assignment, Board
    from pzlkit.grid import build_elements, hp, vp
    from pzlkit.structure import Seq
    from pzlkit.values import NULL

    es = build_elements(GridDims(2, 2))
    loop = (hp(1, 1), hp(2, 1), vp(1, 1), vp(1, 2))
    board = Board(GridDims(2, 2), es, {"Gp": (Seq(loop),)})
    values = {e: NULL for e in es.P + es.Ec}
    for e in es.Ep:
        values[e] = 1 if e in loop else 0
    for e, v in zip(es.C, (4, 1, 1, 0)):
        values[e] = v
    asg = Assignment(values, {("Gp", 0): NULL})
    assert oracle_validate("slitherlink", board, asg)
