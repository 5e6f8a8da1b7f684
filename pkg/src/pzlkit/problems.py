"""Problem presentation: masking completed boards down to uniquely
solvable problems.

A problem is a board plus a partial assignment whose entries come from
each family's hidden alphabet; it is valid when exactly one completed
board extends it (the count includes the structure selection, jointly with
the values).  Masking starts from everything the hidden sets allow and
thins clues in seeded order while uniqueness survives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .board import Assignment, Board, CompletedBoard
from .dsl import Rule
from .errors import BudgetExceededError, NotUniqueError, UnmaskableFamilyError
from .grid import Element, GridDims
from .solver import SplitMix64, count_consistent, enumerate_completed
from .solver.engine import GivenValues, count_consistent_nodes
from .solver.model import SearchConfig, default_node_budget
from .values import UNDECIDED, Value


def ext_subseq(partial, full) -> bool:
    """Positionwise extension test: every entry equals its counterpart or
    is undecided.  Sequences must have equal length."""
    partial = tuple(partial)
    full = tuple(full)
    if len(partial) != len(full):
        raise ValueError(
            f"extension test needs equal lengths, got {len(partial)} and {len(full)}"
        )
    for b, a in zip(partial, full):
        if b is UNDECIDED:
            continue
        if not (b is a or b == a):
            return False
    return True


@dataclass(frozen=True)
class Problem:
    board: Board
    presented: Assignment
    certificate: dict


@dataclass(frozen=True)
class RevealAllThenThin:
    """Default policy: reveal whatever the hidden sets allow, then drop
    clues one by one (seeded order) while the problem stays unique."""


@dataclass(frozen=True)
class FixedRevealSet:
    """Reveal exactly the given member keys (element ids / (family, idx)
    slots); everything else is masked.  No thinning."""

    reveal: frozenset


def given_from(board: Board, presented: Assignment) -> GivenValues:
    elements = {
        e: presented.value_of_element(e) for e in board.elements.all_elements()
    }
    instances = {
        family: tuple(
            presented.instance_value(family, idx) for idx in range(len(instances))
        )
        for family, instances in board.selected.items()
    }
    return GivenValues(elements, instances)


def _initial_presented(rule: Rule, completed: CompletedBoard, env: dict, reveal=None):
    board = completed.board
    asg = completed.assignment
    element_values = {}
    instance_values = {}
    removable = []

    def mask_value(family: str, key, value: Value) -> Value:
        hidden = rule.hidden_values(family, env)
        revealed = value in hidden or any(value is h for h in hidden)
        if reveal is not None:
            want = key in reveal
            if want and not revealed:
                raise UnmaskableFamilyError(
                    f"family {family!r} cannot present {value!r}; its hidden set "
                    "lacks the value (static check: unmaskable-family)"
                )
            if not want:
                revealed = False
        if revealed:
            if UNDECIDED in hidden and reveal is None:
                removable.append(key)
            return value
        if UNDECIDED not in hidden:
            raise UnmaskableFamilyError(
                f"family {family!r} can present neither {value!r} nor undecided "
                "(static check: unmaskable-family)"
            )
        return UNDECIDED

    for e in board.elements.all_elements():
        family = board.elements.group_of(e)
        element_values[e] = mask_value(family, e.ident, asg.value_of_element(e))
    for family, instances in board.selected.items():
        for idx in range(len(instances)):
            key = (family, idx)
            instance_values[key] = mask_value(family, key, asg.instance_value(family, idx))
    return Assignment(element_values, instance_values), removable


def mask(
    rule: Rule,
    completed: CompletedBoard,
    seed: int = 0,
    policy=RevealAllThenThin(),
    node_budget: Optional[int] = None,
) -> Problem:
    """Mask a completed board into a unique problem.

    Families whose hidden set is {undecided} are fully masked; values kept
    must belong to their family's hidden set.  Raises
    UnmaskableFamilyError when a value can be neither shown nor masked,
    NotUniqueError when no unique problem exists under the policy, and
    BudgetExceededError when uniqueness cannot be decided in budget.
    """
    board = completed.board
    dims = board.dims
    env = rule.size_env(dims)
    budget = node_budget if node_budget is not None else default_node_budget()
    reveal = policy.reveal if isinstance(policy, FixedRevealSet) else None
    presented, removable = _initial_presented(rule, completed, env, reveal)

    nodes_total = 0

    def unique(p: Assignment) -> bool:
        nonlocal nodes_total
        count, used = count_consistent_nodes(
            rule, dims, given_from(board, p), node_budget=budget, cap=2
        )
        nodes_total += used
        return count == 1

    if not unique(presented):
        raise NotUniqueError(
            "the fully revealed presentation already admits several boards"
        )

    if isinstance(policy, RevealAllThenThin):
        order = list(removable)
        SplitMix64(seed).shuffle(order)
        for key in order:
            trial = presented.replace(
                key if isinstance(key, tuple) else _element_of(board, key), UNDECIDED
            )
            if unique(trial):
                presented = trial

    certificate = {
        "m": dims.m,
        "n": dims.n,
        "engine": "exhaustive",
        "nodes": nodes_total,
        "count": 1,
    }
    return Problem(board, presented, certificate)


def _element_of(board: Board, ident: str) -> Element:
    from .grid import parse_element_id

    return parse_element_id(ident)


def verify_unique(rule: Rule, problem: Problem, node_budget: Optional[int] = None) -> bool:
    """Exactly one completed board extends the presented assignment.

    Budget exhaustion raises (verdict unknown), it never reads as False.
    """
    count = count_consistent(
        rule,
        problem.board.dims,
        given_from(problem.board, problem.presented),
        node_budget=node_budget,
        cap=2,
    )
    return count == 1


@dataclass
class FeasibilityReport:
    rule: str
    dims: GridDims
    completions: int
    enumeration_complete: bool
    unique_problem_found: Optional[bool]
    nodes_used: int
    node_budget: int
    notes: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.completions > 0

    def summary(self) -> str:
        state = "feasible" if self.feasible else "infeasible"
        exact = "" if self.enumeration_complete else " (budget hit; lower bound)"
        unique = {
            True: "unique problem found",
            False: "no unique problem constructed",
            None: "presentation not attempted",
        }[self.unique_problem_found]
        return (
            f"{self.rule} at {self.dims.m}x{self.dims.n}: {state}, "
            f"{self.completions} completed board(s){exact}; {unique}"
        )


def check_rule_feasible(
    rule: Rule,
    dims: GridDims,
    node_budget: Optional[int] = None,
    seed: int = 0,
) -> FeasibilityReport:
    """The computable slice of the puzzle-rule necessary condition: at
    least one completed board exists, and some problem presents uniquely.
    Budget exhaustion is recorded in the report rather than raised."""
    budget = node_budget if node_budget is not None else default_node_budget()
    report = FeasibilityReport(
        rule=rule.name,
        dims=GridDims(*dims),
        completions=0,
        enumeration_complete=True,
        unique_problem_found=None,
        nodes_used=0,
        node_budget=budget,
    )
    try:
        count, used = count_consistent_nodes(rule, dims, node_budget=budget)
        report.completions = count
        report.nodes_used = used
    except BudgetExceededError as exc:
        report.enumeration_complete = False
        report.notes.append(str(exc))
        report.nodes_used = budget
    if not report.feasible and report.enumeration_complete:
        return report
    try:
        first = next(
            iter(enumerate_completed(rule, SearchConfig(dims=dims, limit=1, node_budget=budget)))
        )
    except (StopIteration, BudgetExceededError) as exc:
        if isinstance(exc, BudgetExceededError):
            report.notes.append(f"presentation skipped: {exc}")
        return report
    try:
        mask(rule, first, seed=seed, node_budget=budget)
        report.unique_problem_found = True
    except NotUniqueError as exc:
        report.unique_problem_found = False
        report.notes.append(str(exc))
    except (UnmaskableFamilyError, BudgetExceededError) as exc:
        report.unique_problem_found = False
        report.notes.append(str(exc))
    return report
