import pytest

from pzlkit.board import all_undecided
from pzlkit.corpus import load_rule
from pzlkit.dsl import parse_rule
from pzlkit.errors import NotUniqueError, UnmaskableFamilyError
from pzlkit.grid import GridDims
from pzlkit.problems import (
    FixedRevealSet,
    check_rule_feasible,
    ext_subseq,
    given_from,
    mask,
    verify_unique,
)
from pzlkit.solver import SearchConfig, count_consistent, enumerate_completed
from pzlkit.values import UNDECIDED


def test_ext_subseq_examples():
    assert ext_subseq((UNDECIDED, 3), (5, 3))
    assert not ext_subseq((4, 3), (5, 3))
    assert ext_subseq((UNDECIDED, UNDECIDED), (9, 0))
    with pytest.raises(ValueError):
        ext_subseq((1,), (1, 2))


def test_ext_subseq_reflexive_and_rigid():
    seq = (1, 2, 3)
    assert ext_subseq(seq, seq)
    # without undecided entries, extension means equality
    assert not ext_subseq((1, 2, 4), seq)


SLITHERLINK = load_rule("slitherlink")
SUDOKU = load_rule("sudoku")


def _first_completed(rule, dims):
    return next(iter(enumerate_completed(rule, SearchConfig(dims=dims, limit=1))))


def test_mask_slitherlink_2x2_unique():
    cb = _first_completed(SLITHERLINK, GridDims(2, 2))
    problem = mask(SLITHERLINK, cb, seed=3)
    # all point edges forcibly masked: hidden Ep = {undecided}
    for e in problem.board.elements.Ep:
        assert problem.presented.value_of_element(e) is UNDECIDED
    assert verify_unique(SLITHERLINK, problem)
    assert problem.certificate["count"] == 1
    assert problem.certificate["engine"] == "exhaustive"


def test_mask_values_match_source():
    cb = _first_completed(SUDOKU, GridDims(4, 4))
    problem = mask(SUDOKU, cb, seed=9)
    for e in problem.board.elements.all_elements():
        got = problem.presented.value_of_element(e)
        if got is not UNDECIDED:
            assert got == cb.assignment.value_of_element(e)


def test_mask_closed_loop_property():
    for seed in (0, 1, 2):
        cb = _first_completed(SUDOKU, GridDims(4, 4))
        problem = mask(SUDOKU, cb, seed=seed)
        assert verify_unique(SUDOKU, problem)


def test_zero_removal_mask_is_trivially_unique():
    cb = _first_completed(SUDOKU, GridDims(4, 4))
    keys = frozenset(e.ident for e in cb.board.elements.all_elements()) | {
        (f, i) for f, insts in cb.board.selected.items() for i in range(len(insts))
    }
    problem = mask(SUDOKU, cb, policy=FixedRevealSet(keys))
    assert verify_unique(SUDOKU, problem)
    for e in cb.board.elements.C:
        assert problem.presented.value_of_element(e) == cb.assignment.value_of_element(e)


def test_all_undecided_slitherlink_not_unique():
    cb = _first_completed(SLITHERLINK, GridDims(2, 2))
    blank = all_undecided(cb.board)
    assert count_consistent(SLITHERLINK, GridDims(2, 2), given_from(cb.board, blank)) == 13


def test_sukoro_mask_cannot_reach_uniqueness():
    rule = load_rule("sukoro")
    cb = _first_completed(rule, GridDims(2, 2))
    with pytest.raises(NotUniqueError):
        mask(rule, cb, seed=0)


def test_hitori_mask_unmaskable():
    rule = load_rule("hitori")
    boards = enumerate_completed(rule, SearchConfig(dims=GridDims(3, 3), limit=40))
    # pick a board that actually contains a black cell
    from pzlkit.values import MARK

    cb = next(
        b
        for b in boards
        if any(v is MARK for v in b.assignment.element_values.values())
    )
    with pytest.raises(UnmaskableFamilyError):
        mask(rule, cb, seed=0)


def test_verify_unique_full_assignment():
    cb = _first_completed(SLITHERLINK, GridDims(2, 2))
    from pzlkit.problems import Problem

    problem = Problem(cb.board, cb.assignment, {})
    assert verify_unique(SLITHERLINK, problem)


def test_check_rule_feasible_slitherlink():
    report = check_rule_feasible(SLITHERLINK, GridDims(2, 2))
    assert report.feasible
    assert report.completions == 13
    assert report.enumeration_complete
    assert report.unique_problem_found is True
    assert "13" in report.summary()


def test_check_rule_feasible_contradiction():
    rule = parse_rule('puzzle "never"\nconstraint 1 == 2\n')
    report = check_rule_feasible(rule, GridDims(2, 2))
    assert not report.feasible
    assert report.completions == 0
    assert report.unique_problem_found is None


def test_check_rule_feasible_shidoku():
    report = check_rule_feasible(SUDOKU, GridDims(4, 4))
    assert report.completions == 288
    assert report.unique_problem_found is True


def test_check_rule_feasible_budget_recorded_not_raised():
    report = check_rule_feasible(SLITHERLINK, GridDims(2, 2), node_budget=40)
    assert not report.enumeration_complete
    assert report.notes
