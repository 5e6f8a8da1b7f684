"""Engine checks against independent brute-force oracles.

The Slitherlink oracle walks all 2^12 edge assignments of the 2x2 grid and
keeps those whose 1-edges form one closed loop (every point of degree 0 or
2, all 1-edges connected); the Shidoku oracle assembles 4x4 arrays from row
permutations and checks columns and boxes.  Neither touches the engine.
"""

import itertools

import pytest

from pzlkit.board import board_members
from pzlkit.corpus import load_rule
from pzlkit.dsl import parse_rule
from pzlkit.errors import BudgetExceededError
from pzlkit.grid import GridDims, build_elements
from pzlkit.semantics import satisfies
from pzlkit.solver import (
    SearchConfig,
    count_consistent,
    enumerate_completed,
    generate_completed,
)
from pzlkit.solver.engine import GivenValues, canonical_key, completed_sort_key
from pzlkit.values import UNDECIDED


def brute_force_slitherlink_2x2():
    """Count single-loop edge assignments plus the forced cell values."""
    es = build_elements(GridDims(2, 2))
    edges = es.Ep

    def endpoints(e):
        if e.kind.symbol == "hp":
            return ((e.i, e.j), (e.i, e.j + 1))
        return ((e.i, e.j), (e.i + 1, e.j))

    count = 0
    for bitsel in itertools.product((0, 1), repeat=12):
        ones = [e for e, b in zip(edges, bitsel) if b]
        if not ones:
            continue
        degree = {}
        for e in ones:
            for pt in endpoints(e):
                degree[pt] = degree.get(pt, 0) + 1
        if any(d != 2 for d in degree.values()):
            continue
        seen = set()
        stack = [next(iter(degree))]
        adj = {}
        for e in ones:
            a, b = endpoints(e)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            stack.extend(adj[p])
        if seen == set(degree):
            count += 1
    return count


def brute_force_shidoku():
    perms = list(itertools.permutations((1, 2, 3, 4)))
    count = 0
    for r1 in perms:
        for r2 in perms:
            if any(a == b for a, b in zip(r1, r2)):
                continue
            if {r1[0], r1[1], r2[0], r2[1]} != {1, 2, 3, 4}:
                continue
            for r3 in perms:
                if any(a == b for a, b in zip(r1, r3)) or any(
                    a == b for a, b in zip(r2, r3)
                ):
                    continue
                for r4 in perms:
                    if (
                        any(a == b for a, b in zip(r1, r4))
                        or any(a == b for a, b in zip(r2, r4))
                        or any(a == b for a, b in zip(r3, r4))
                    ):
                        continue
                    if {r3[0], r3[1], r4[0], r4[1]} != {1, 2, 3, 4}:
                        continue
                    if {r3[2], r3[3], r4[2], r4[3]} != {1, 2, 3, 4}:
                        continue
                    count += 1
    return count


SLITHERLINK = load_rule("slitherlink")
SUDOKU = load_rule("sudoku")


def test_slitherlink_2x2_count_matches_loop_oracle():
    expected = brute_force_slitherlink_2x2()
    assert expected == 13
    boards = list(enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2))))
    assert len(boards) == expected


def test_shidoku_count_matches_brute_force():
    expected = brute_force_shidoku()
    assert expected == 288
    boards = list(enumerate_completed(SUDOKU, SearchConfig(dims=GridDims(4, 4))))
    assert len(boards) == expected


def test_exhaustive_soundness_independent_pass():
    for cb in enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2))):
        assert satisfies(SLITHERLINK, cb.board, cb.assignment)


def test_exhaustive_canonical_order():
    boards = list(enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2))))
    keys = [completed_sort_key(SLITHERLINK, cb) for cb in boards]
    assert keys == sorted(keys)
    assert len({canonical_key(SLITHERLINK, cb) for cb in boards}) == len(boards)


def test_exhaustive_respects_limit():
    boards = list(
        enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2), limit=4))
    )
    assert len(boards) == 4


def test_unsatisfiable_rule_yields_empty_stream():
    rule = parse_rule('puzzle "never"\nconstraint 1 == 2\n')
    assert list(enumerate_completed(rule, SearchConfig(dims=GridDims(2, 2)))) == []


def test_budget_exhaustion_is_an_error():
    with pytest.raises(BudgetExceededError):
        list(
            enumerate_completed(
                SLITHERLINK, SearchConfig(dims=GridDims(2, 2), node_budget=50)
            )
        )


def test_constructive_deterministic():
    config = SearchConfig(dims=GridDims(4, 4), engine="constructive", seed=5, limit=5)
    a = generate_completed(SLITHERLINK, config)
    b = generate_completed(SLITHERLINK, config)
    seq = lambda r: [cb.assignment.sequence(cb.board) for cb in r.boards]
    assert seq(a) == seq(b)
    assert a.attempts == b.attempts


def test_constructive_subset_of_exhaustive():
    exact = {
        tuple(map(repr, cb.assignment.sequence(cb.board)))
        for cb in enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2)))
    }
    result = generate_completed(
        SLITHERLINK, SearchConfig(dims=GridDims(2, 2), engine="constructive", seed=3, limit=20)
    )
    got = {
        tuple(map(repr, cb.assignment.sequence(cb.board))) for cb in result.boards
    }
    assert got <= exact
    assert len(result.boards) <= 13


def test_constructive_results_pass_evaluator():
    result = generate_completed(
        load_rule("fillomino"),
        SearchConfig(dims=GridDims(4, 4), engine="constructive", seed=1, limit=5),
    )
    assert len(result.boards) == 5
    for cb in result.boards:
        assert satisfies(load_rule("fillomino"), cb.board, cb.assignment)


def test_engine_agreement_small_grids():
    for name, dims in (("fillomino", GridDims(2, 2)), ("shikaku", GridDims(2, 2))):
        rule = load_rule(name)
        exact = {
            canonical_key(rule, cb)
            for cb in enumerate_completed(rule, SearchConfig(dims=dims))
        }
        got = generate_completed(
            rule, SearchConfig(dims=dims, engine="constructive", seed=2, limit=30)
        )
        assert {canonical_key(rule, cb) for cb in got.boards} <= exact


def test_count_consistent_examples():
    es = build_elements(GridDims(2, 2))
    empty = GivenValues({e: UNDECIDED for e in es.all_elements()}, {"Gp": (UNDECIDED,)})
    assert count_consistent(SLITHERLINK, GridDims(2, 2), empty) == 13

    boards = list(enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2))))
    cb = boards[0]
    full = GivenValues(
        {e: cb.assignment.value_of_element(e) for e in es.all_elements()},
        {"Gp": tuple(cb.assignment.instance_value("Gp", i) for i in range(1))},
    )
    assert count_consistent(SLITHERLINK, GridDims(2, 2), full) == 1


def test_count_consistent_contradiction():
    es = build_elements(GridDims(2, 2))
    given = {e: UNDECIDED for e in es.all_elements()}
    given[es.C[0]] = 5  # cycle can never reach 5
    assert (
        count_consistent(
            SLITHERLINK, GridDims(2, 2), GivenValues(given, {})
        )
        == 0
    )


def test_count_monotone_in_givens():
    es = build_elements(GridDims(2, 2))
    boards = list(enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2))))
    cb = boards[5]
    base = {e: UNDECIDED for e in es.all_elements()}
    counts = []
    given = dict(base)
    counts.append(count_consistent(SLITHERLINK, GridDims(2, 2), GivenValues(given, {})))
    for cell in es.C:
        given[cell] = cb.assignment.value_of_element(cell)
        counts.append(
            count_consistent(SLITHERLINK, GridDims(2, 2), GivenValues(dict(given), {}))
        )
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] >= 1


def test_board_selection_invariants():
    for cb in enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2), limit=3)):
        loops = board_members(cb.board, "Gp")
        assert len(loops) == 1
        ones = [
            e
            for e in cb.board.elements.Ep
            if cb.assignment.value_of_element(e) == 1
        ]
        assert tuple(ones) == loops[0].members
