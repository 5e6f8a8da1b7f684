"""Typed representation of a parsed rule file.

A rule is the quadruple that defines a puzzle: the combined-structure
declarations, a domain per value-carrying family, a hidden (presentation)
alphabet per family, and an ordered list of constraint expressions, plus
any grid-size requirements.  Expression nodes are plain frozen dataclasses;
evaluation lives in :mod:`pzlkit.semantics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import PzlError
from ..graphs import FamilySpec, base_spec
from ..grid import BASE_FAMILIES, BASE_GROUPS, GridDims
from ..relations import RelationKind
from ..values import NULL, Value, value_sort_key


class RequirementError(PzlError):
    """The rule's size requirements cannot be met at the given dimensions."""


# --- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Arith:
    op: str  # + - * ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str  # == != < <=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    expr: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Iff:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class ForAll:
    var: str
    coll: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class Exists:
    var: str
    coll: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class SumExpr:
    var: str
    coll: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class ProdExpr:
    var: str
    coll: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class CountExpr:
    coll: "Expr"


@dataclass(frozen=True)
class SizeOf:
    expr: "Expr"


@dataclass(frozen=True)
class SolutionOf:
    expr: "Expr"


@dataclass(frozen=True)
class BoardOf:
    family: str


@dataclass(frozen=True)
class MembersOf:
    expr: "Expr"


@dataclass(frozen=True)
class ConnectTo:
    expr: "Expr"
    relations: frozenset  # of RelationKind


@dataclass(frozen=True)
class RegionContaining:
    family: str
    expr: "Expr"


@dataclass(frozen=True)
class FilterExpr:
    coll: "Expr"
    var: str
    predicate: "Expr"


@dataclass(frozen=True)
class Builtin:
    name: str  # cross cycle all_different is_rectangle is_square no_overlap fill factorial
    args: tuple


Expr = Union[
    Literal, Var, Arith, Compare, Not, And, Or, Implies, Iff,
    ForAll, Exists, SumExpr, ProdExpr, CountExpr, SizeOf, SolutionOf,
    BoardOf, MembersOf, ConnectTo, RegionContaining, FilterExpr, Builtin,
]


# --- value sets -------------------------------------------------------------


@dataclass(frozen=True)
class ValueItem:
    value: Value


@dataclass(frozen=True)
class RangeItem:
    lo: Expr
    hi: Expr


ValueSet = tuple  # of ValueItem | RangeItem


def _item_key(item) -> tuple:
    if isinstance(item, ValueItem):
        return (0, value_sort_key(item.value), "")
    lo = item.lo
    if isinstance(lo, Literal) and isinstance(lo.value, int):
        return (0, (1, lo.value), repr(item))
    return (0, (1, 1 << 62), repr(item))


def normalize_valueset(items) -> ValueSet:
    """Canonical item order: explicit values ascending, ranges slotted by
    their lower bound (symbolic ranges after all integers)."""
    return tuple(sorted(items, key=_item_key))


def eval_const(expr: Expr, env: dict) -> int | bool | Value:
    """Evaluate a dims-level expression (requirements, range bounds).

    Only integer arithmetic, factorial, comparisons and connectives are
    meaningful here; the environment maps parameter names (m, n, k) to ints.
    """
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Var):
        if expr.name not in env:
            raise RequirementError(f"parameter {expr.name} is not bound")
        return env[expr.name]
    if isinstance(expr, Arith):
        a = eval_const(expr.left, env)
        b = eval_const(expr.right, env)
        if not isinstance(a, int) or not isinstance(b, int):
            raise RequirementError("size expressions must be integers")
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "^":
            return a**b
        raise RequirementError(f"unsupported operator {expr.op}")
    if isinstance(expr, Compare):
        a = eval_const(expr.left, env)
        b = eval_const(expr.right, env)
        if expr.op == "==":
            return a == b
        if expr.op == "!=":
            return a != b
        if expr.op == "<":
            return a < b
        if expr.op == "<=":
            return a <= b
    if isinstance(expr, Not):
        return not eval_const(expr.expr, env)
    if isinstance(expr, And):
        return eval_const(expr.left, env) and eval_const(expr.right, env)
    if isinstance(expr, Or):
        return eval_const(expr.left, env) or eval_const(expr.right, env)
    if isinstance(expr, Implies):
        return (not eval_const(expr.left, env)) or eval_const(expr.right, env)
    if isinstance(expr, Iff):
        return bool(eval_const(expr.left, env)) == bool(eval_const(expr.right, env))
    if isinstance(expr, Builtin) and expr.name == "factorial":
        v = eval_const(expr.args[0], env)
        if not isinstance(v, int) or v < 0:
            raise RequirementError("factorial needs a nonnegative integer")
        return math.factorial(v)
    raise RequirementError(f"not a size-level expression: {type(expr).__name__}")


def resolve_valueset(vs: ValueSet, env: dict) -> tuple[Value, ...]:
    """Expand a value set at known dimensions: ranges inclusive, result
    deduplicated and in canonical ascending order."""
    out: set = set()
    for item in vs:
        if isinstance(item, ValueItem):
            out.add(item.value)
        else:
            lo = eval_const(item.lo, env)
            hi = eval_const(item.hi, env)
            if not isinstance(lo, int) or not isinstance(hi, int):
                raise RequirementError("range bounds must be integers")
            out.update(range(lo, hi + 1))
    if not out:
        raise RequirementError("value set resolved to nothing")
    return tuple(sorted(out, key=value_sort_key))


# --- rule -------------------------------------------------------------------


@dataclass(frozen=True)
class StructDef:
    """`structure NAME = combine {R,...} on BASE`."""

    name: str
    relations: frozenset  # of RelationKind
    base: str  # a base family or a previously declared structure


@dataclass(frozen=True)
class Rule:
    name: str
    requires: tuple = ()
    structures: tuple = ()  # of StructDef, in declaration order
    domains: dict = field(default_factory=dict)  # family -> ValueSet
    hidden: dict = field(default_factory=dict)  # family -> ValueSet
    constraints: tuple = ()

    def combined_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.structures)

    def family_names(self) -> tuple[str, ...]:
        """Everything addressable in B(...): the eight base sequences plus
        declared structures."""
        return BASE_FAMILIES + self.combined_names()

    def value_families(self) -> tuple[str, ...]:
        """Families that carry solution values (one entry per board member)."""
        return BASE_GROUPS + self.combined_names()

    def is_combined(self, family: str) -> bool:
        return family in self.combined_names()

    def family_spec(self, family: str) -> FamilySpec:
        if family in BASE_FAMILIES:
            return base_spec(family)
        for sd in self.structures:
            if sd.name == family:
                return FamilySpec(sd.name, sd.relations, self.family_spec(sd.base))
        raise KeyError(f"unknown family: {family}")

    def domain_set(self, family: str) -> ValueSet:
        """Declared domain, defaulting to {null} for undeclared families."""
        return self.domains.get(family, (ValueItem(NULL),))

    def hidden_set(self, family: str) -> ValueSet:
        """Declared hidden set, defaulting to the domain when omitted."""
        return self.hidden.get(family, self.domain_set(family))

    def uses_param(self, name: str) -> bool:
        seen = [False]

        def walk(node):
            if isinstance(node, Var) and node.name == name:
                seen[0] = True
            for f in getattr(node, "__dataclass_fields__", ()):
                v = getattr(node, f)
                if isinstance(v, tuple):
                    for item in v:
                        if hasattr(item, "__dataclass_fields__"):
                            walk(item)
                elif hasattr(v, "__dataclass_fields__"):
                    walk(v)

        for r in self.requires:
            walk(r)
        return seen[0]

    def size_env(self, dims: GridDims) -> dict:
        """Solve the size requirements at concrete dimensions.

        Returns the parameter environment (m, n and, when used, the
        smallest k that satisfies every requirement).  Raises
        RequirementError when no assignment works.
        """
        base = {"m": dims.m, "n": dims.n}
        if not self.uses_param("k"):
            if all(eval_const(r, base) for r in self.requires):
                return base
            raise RequirementError(
                f"rule {self.name!r} rejects size {dims.m}x{dims.n}"
            )
        for k in range(1, max(dims.m, dims.n) + 2):
            env = dict(base, k=k)
            if all(eval_const(r, env) for r in self.requires):
                return env
        raise RequirementError(
            f"rule {self.name!r} rejects size {dims.m}x{dims.n} for every k"
        )

    def domain_values(self, family: str, env: dict) -> tuple[Value, ...]:
        return resolve_valueset(self.domain_set(family), env)

    def hidden_values(self, family: str, env: dict) -> tuple[Value, ...]:
        return resolve_valueset(self.hidden_set(family), env)


def walk_expr(expr: Expr):
    """Preorder traversal of an expression tree."""
    yield expr
    for f in expr.__dataclass_fields__:
        v = getattr(expr, f)
        if isinstance(v, tuple):
            for item in v:
                if hasattr(item, "__dataclass_fields__"):
                    yield from walk_expr(item)
        elif hasattr(v, "__dataclass_fields__") and not isinstance(
            v, (RelationKind,)
        ):
            yield from walk_expr(v)
