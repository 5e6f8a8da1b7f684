"""pzlkit: a rule-definition engine for grid pencil puzzles.

Parse a declarative rule file (structures, domains, constraints, hidden
alphabets), generate and verify completed boards, and present uniquely
solvable problems.
"""

from .board import Assignment, Board, CompletedBoard, board_members
from .dsl import parse_rule, serialize_rule, static_check
from .grid import GridDims, build_elements
from .problems import Problem, check_rule_feasible, ext_subseq, mask, verify_unique
from .semantics import eval_expr, satisfies
from .solver import (
    SearchConfig,
    count_consistent,
    enumerate_completed,
    generate_completed,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Board",
    "CompletedBoard",
    "board_members",
    "parse_rule",
    "serialize_rule",
    "static_check",
    "GridDims",
    "build_elements",
    "Problem",
    "check_rule_feasible",
    "ext_subseq",
    "mask",
    "verify_unique",
    "eval_expr",
    "satisfies",
    "SearchConfig",
    "count_consistent",
    "enumerate_completed",
    "generate_completed",
    "__version__",
]
