"""Compilation of a rule at fixed dimensions into a searchable model.

Families are planned by how their selections will be produced:

* fill plan — the family (or a joint group of families) partitions its
  base elements; selections are enumerated or sampled as partitions into
  connected blocks, with value-free per-instance checks applied as blocks
  close.
* derived plan — a membership constraint of the shape
  ``forall e in B(Base): P(solution(e)) iff (region(F, e) != null)``
  ties the selection to the values, so the engine searches values and
  reads the selection back off the marker set.
* explicit plan — fall back to enumerating subsets of the family's
  instance stream (gated by the node budget).

Constraints are ground per selection into atoms (quantifiers expanded
over the concrete board) with the exact set of decision variables each
atom reads, discovered by evaluating it against a recording assignment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..board import Board
from ..dsl.ast import (
    And,
    BoardOf,
    Builtin,
    Compare,
    ConnectTo,
    CountExpr,
    Expr,
    ForAll,
    Iff,
    Literal,
    Not,
    RegionContaining,
    Rule,
    SizeOf,
    SolutionOf,
    Var,
    eval_const,
    walk_expr,
)
from ..errors import EvalError, PzlError
from ..grid import BASE_FAMILIES, Element, GridDims, build_elements
from ..semantics import _GROUP_OF_BASE, UNKNOWN, Coll, Evaluator
from ..values import NULL, Value

DEFAULT_NODE_BUDGET = 2_000_000


def default_node_budget() -> int:
    raw = os.environ.get("PZL_NODE_BUDGET")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_NODE_BUDGET


@dataclass(frozen=True)
class SearchConfig:
    dims: GridDims
    engine: str = "exhaustive"  # or "constructive"
    seed: int = 0
    limit: int = 1_000_000
    node_budget: int = field(default_factory=default_node_budget)

    def __post_init__(self):
        if self.engine not in ("exhaustive", "constructive"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if self.node_budget < 1:
            raise ValueError("node budget must be positive")


@dataclass
class InstanceCheck:
    """A value-free-checkable per-instance predicate: bind ``var`` to a
    candidate block and evaluate three-valued."""

    var: str
    body: Expr


@dataclass
class FillPlan:
    families: tuple  # of str; >1 means a joint partition
    base: str  # base family whose elements get partitioned
    relations: dict  # family -> frozenset of relations
    checks: dict  # family -> list[InstanceCheck]
    size_caps: dict  # family -> int | None
    size_floors: dict = field(default_factory=dict)  # family -> int


@dataclass
class DerivedPlan:
    family: str
    base: str  # quantified base family (the marker carrier)
    marker: Callable  # Value -> bool; True means "member of some instance"
    relations: frozenset
    exact_size: Optional[int]
    count_hint: Optional[int]
    loop_shaped: bool
    member_values: tuple  # domain values implying membership
    nonmember_values: tuple


@dataclass
class ExplicitPlan:
    family: str
    count_hint: Optional[int]
    checks: list  # of InstanceCheck


class Recorder:
    """Assignment stand-in that reports UNKNOWN everywhere and notes which
    variables were consulted."""

    def __init__(self, model: "SearchModel", inst_ids: dict):
        self.model = model
        self.inst_ids = inst_ids
        self.touched: set[int] = set()

    def value_of_element(self, e: Element):
        self.touched.add(self.model.elem_index[e])
        return UNKNOWN

    def instance_value(self, family: str, idx: int):
        self.touched.add(self.inst_ids[(family, idx)])
        return UNKNOWN


@dataclass
class Atom:
    expr: Expr
    env: dict
    varids: frozenset


def _mentioned_families(expr: Expr) -> set[str]:
    out: set[str] = set()
    for node in walk_expr(expr):
        if isinstance(node, BoardOf):
            out.add(node.family)
        elif isinstance(node, RegionContaining):
            out.add(node.family)
        elif isinstance(node, Builtin) and node.name in ("no_overlap", "fill"):
            out.update(node.args)
    return out


def _is_value_free_safe(expr: Expr) -> bool:
    """Safe to evaluate against a single candidate block: no references to
    the rest of the board."""
    for node in walk_expr(expr):
        if isinstance(node, (BoardOf, ConnectTo, RegionContaining)):
            return False
        if isinstance(node, Builtin) and node.name in ("no_overlap", "fill"):
            return False
    return True


def _conjuncts(expr: Expr):
    if isinstance(expr, And):
        yield from _conjuncts(expr.left)
        yield from _conjuncts(expr.right)
    else:
        yield expr


def _match_count_hint(expr: Expr):
    """|B(F)| == k constraints."""
    if not isinstance(expr, Compare) or expr.op != "==":
        return None
    sides = (expr.left, expr.right)
    for a, b in (sides, sides[::-1]):
        if (
            isinstance(a, CountExpr)
            and isinstance(a.coll, BoardOf)
            and isinstance(b, Literal)
            and isinstance(b.value, int)
        ):
            return (a.coll.family, b.value)
    return None


def _match_marker_quota(expr: Expr):
    """forall v in B(F): count(filter(members(v), w: pred(solution(w)))) == k.

    Returns (family, k, pred expr, pred var) or None.  Such a constraint
    floors the family's block sizes at k and, paired with a derived family
    whose marker matches ``pred``, pins the total marker count.
    """
    if not isinstance(expr, ForAll) or not isinstance(expr.coll, BoardOf):
        return None
    body = expr.body
    if not isinstance(body, Compare) or body.op != "==":
        return None
    sides = (body.left, body.right)
    for a, b in (sides, sides[::-1]):
        if not (isinstance(a, CountExpr) and isinstance(b, Literal) and isinstance(b.value, int)):
            continue
        coll = a.coll
        from ..dsl.ast import FilterExpr, MembersOf

        if not (isinstance(coll, FilterExpr) and isinstance(coll.coll, MembersOf)):
            continue
        target = coll.coll.expr
        if not (isinstance(target, Var) and target.name == expr.var):
            continue
        if _predicate_on_var_only(coll.predicate, coll.var):
            return (expr.coll.family, b.value, coll.predicate, coll.var)
    return None


def _match_membership_iff(expr: Expr, combined: set[str]):
    """forall v in B(base): P(solution(v)) iff (region(F, v) ==/!= null).

    Returns (family, base, predicate expr, var, polarity) or None.
    """
    if not isinstance(expr, ForAll) or not isinstance(expr.coll, BoardOf):
        return None
    base = expr.coll.family
    if base not in BASE_FAMILIES:
        return None
    body = expr.body
    if not isinstance(body, Iff):
        return None
    for pred_side, region_side in ((body.left, body.right), (body.right, body.left)):
        m = _match_region_null_test(region_side, expr.var)
        if m is None:
            continue
        family, polarity = m
        if family not in combined:
            continue
        if _predicate_on_var_only(pred_side, expr.var):
            return (family, base, pred_side, expr.var, polarity)
    return None


def _match_region_null_test(expr: Expr, var: str):
    """region(F, v) != null  (polarity True) or == null (polarity False)."""
    if not isinstance(expr, Compare) or expr.op not in ("==", "!="):
        return None
    sides = (expr.left, expr.right)
    for a, b in (sides, sides[::-1]):
        if (
            isinstance(a, RegionContaining)
            and isinstance(a.expr, Var)
            and a.expr.name == var
            and isinstance(b, Literal)
            and b.value is NULL
        ):
            return (a.family, expr.op == "!=")
    return None


def _predicate_on_var_only(expr: Expr, var: str) -> bool:
    """Value predicate usable as a marker: only solution(var), literals,
    comparisons and connectives."""
    from ..dsl.ast import Arith, Iff as _Iff, Implies, Or

    def ok(node) -> bool:
        if isinstance(node, Literal):
            return True
        if isinstance(node, SolutionOf):
            return isinstance(node.expr, Var) and node.expr.name == var
        if isinstance(node, (Compare, Arith, And, Or, Implies, _Iff)):
            return ok(node.left) and ok(node.right)
        if isinstance(node, Not):
            return ok(node.expr)
        return False

    return ok(expr)


class _MarkerProbe:
    """Assignment view that pins one element to a candidate value."""

    def __init__(self, element: Element, value: Value):
        self.element = element
        self.value = value

    def value_of_element(self, e: Element):
        if e == self.element:
            return self.value
        return UNKNOWN

    def instance_value(self, family, idx):
        return UNKNOWN


class SearchModel:
    def __init__(self, rule: Rule, dims: GridDims):
        self.rule = rule
        self.dims = GridDims(*dims)
        self.env = rule.size_env(self.dims)  # raises RequirementError when unmet
        self.es = build_elements(self.dims)
        self.elements = self.es.all_elements()
        self.elem_index = {e: i for i, e in enumerate(self.elements)}
        self.elem_domain = [
            rule.domain_values(self.es.group_of(e), self.env) for e in self.elements
        ]
        self.count_hints: dict[str, int] = {}
        for cexpr in rule.constraints:
            for conj in _conjuncts(cexpr):
                hit = _match_count_hint(conj)
                if hit:
                    self.count_hints[hit[0]] = hit[1]
        self.plans: list = []
        self.derived_families: set[str] = set()
        self._build_plans()
        self.marker_quotas: list = []  # (family, k, marker value set)
        self._collect_quotas()
        self.deferred = [
            c
            for c in rule.constraints
            if _mentioned_families(c) & self.derived_families
        ]
        self.groundable = [c for c in rule.constraints if c not in self.deferred]

    # -- planning ---------------------------------------------------------

    def _instance_checks(self, family: str) -> list[InstanceCheck]:
        out = []
        for cexpr in self.rule.constraints:
            if not (isinstance(cexpr, ForAll) and isinstance(cexpr.coll, BoardOf)):
                continue
            if cexpr.coll.family != family:
                continue
            for conj in _conjuncts(cexpr.body):
                if _is_value_free_safe(conj):
                    out.append(InstanceCheck(cexpr.var, conj))
        return out

    def _size_bounds(self, chk: InstanceCheck):
        """(op, bound) pairs for size(var) comparisons inside one check."""
        for conj in _conjuncts(chk.body):
            if not isinstance(conj, Compare):
                continue
            sides = (conj.left, conj.right)
            for a, b in (sides, sides[::-1]):
                if (
                    isinstance(a, SizeOf)
                    and isinstance(a.expr, Var)
                    and a.expr.name == chk.var
                ):
                    try:
                        bound = eval_const(b, self.env)
                    except PzlError:
                        continue
                    if not isinstance(bound, int):
                        continue
                    if conj.op == "==":
                        yield ("==", bound)
                    elif conj.op in ("<", "<=") and a is conj.left:
                        yield ("<=", bound if conj.op == "<=" else bound - 1)

    def _size_cap(self, checks: list[InstanceCheck]) -> Optional[int]:
        cap = None
        for chk in checks:
            for _, bound in self._size_bounds(chk):
                cap = bound if cap is None else min(cap, bound)
        return cap

    def _exact_size(self, checks: list[InstanceCheck]) -> Optional[int]:
        for chk in checks:
            for op, bound in self._size_bounds(chk):
                if op == "==":
                    return bound
        return None

    def _build_plans(self) -> None:
        rule = self.rule
        combined = set(rule.combined_names())
        fill_groups: list[tuple[str, ...]] = []
        for cexpr in rule.constraints:
            for conj in _conjuncts(cexpr):
                if isinstance(conj, Builtin) and conj.name == "fill":
                    fams = tuple(f for f in conj.args if f in combined)
                    if fams and fams not in fill_groups:
                        fill_groups.append(fams)

        planned: set[str] = set()
        # merge overlapping fill groups
        merged: list[list[str]] = []
        for group in fill_groups:
            hit = None
            for acc in merged:
                if set(acc) & set(group):
                    hit = acc
                    break
            if hit is None:
                merged.append(list(group))
            else:
                hit.extend(f for f in group if f not in hit)

        marker_hits = {}
        for cexpr in rule.constraints:
            for conj in _conjuncts(cexpr):
                hit = _match_membership_iff(conj, combined)
                if hit:
                    marker_hits[hit[0]] = hit

        has_cross = any(
            isinstance(node, Builtin) and node.name == "cross"
            for cexpr in rule.constraints
            for node in walk_expr(cexpr)
        )

        for name in rule.combined_names():
            if name in planned:
                continue
            group = next((g for g in merged if name in g), None)
            if group is not None:
                fams = tuple(group)
                specs = {f: rule.family_spec(f) for f in fams}
                if all(spec.base.is_base for spec in specs.values()):
                    base_names = {spec.base.name for spec in specs.values()}
                    if len(base_names) == 1:
                        checks = {f: self._instance_checks(f) for f in fams}
                        self.plans.append(
                            FillPlan(
                                families=fams,
                                base=base_names.pop(),
                                relations={f: specs[f].relations for f in fams},
                                checks=checks,
                                size_caps={f: self._size_cap(checks[f]) for f in fams},
                            )
                        )
                        planned.update(fams)
                        continue
                # mixed or nested bases: enumerate each family explicitly
                for f in fams:
                    self.plans.append(
                        ExplicitPlan(f, self.count_hints.get(f), self._instance_checks(f))
                    )
                planned.update(fams)
                continue
            if name in marker_hits and self.es.sequence(marker_hits[name][1]):
                family, base, pred, var, polarity = marker_hits[name]
                spec = rule.family_spec(family)
                checks = self._instance_checks(family)
                marker = self._make_marker(base, pred, var, polarity)
                group_domain = rule.domain_values(_GROUP_OF_BASE[base], self.env)
                member_vals = tuple(v for v in group_domain if marker(v))
                nonmember_vals = tuple(v for v in group_domain if not marker(v))
                self.plans.append(
                    DerivedPlan(
                        family=family,
                        base=base,
                        marker=marker,
                        relations=spec.relations,
                        exact_size=self._exact_size(checks),
                        count_hint=self.count_hints.get(family),
                        loop_shaped=has_cross and _GROUP_OF_BASE[base] == "Ep",
                        member_values=member_vals,
                        nonmember_values=nonmember_vals,
                    )
                )
                self.derived_families.add(family)
                planned.add(name)
                continue
            self.plans.append(
                ExplicitPlan(name, self.count_hints.get(name), self._instance_checks(name))
            )
            planned.add(name)

    def _collect_quotas(self) -> None:
        """Marker quotas tighten fill plans (size floors) and let the
        randomized engine pin marker counts before sampling."""
        for cexpr in self.rule.constraints:
            for conj in _conjuncts(cexpr):
                hit = _match_marker_quota(conj)
                if hit is None:
                    continue
                family, k, pred, var = hit
                try:
                    spec = self.rule.family_spec(family)
                except KeyError:
                    continue
                if spec.is_base:
                    continue
                base = spec.root_base()
                if not self.es.sequence(base):
                    continue
                marker = self._make_marker(base, pred, var, True)
                group_domain = self.rule.domain_values(_GROUP_OF_BASE[base], self.env)
                values = frozenset(v for v in group_domain if marker(v))
                self.marker_quotas.append((family, k, values))
                for plan in self.plans:
                    if isinstance(plan, FillPlan) and family in plan.families:
                        floor = plan.size_floors.get(family, 1)
                        plan.size_floors[family] = max(floor, k)

    def _make_marker(self, base: str, pred: Expr, var: str, polarity: bool):
        rule, dims = self.rule, self.dims
        sample = self.es.sequence(base)[0] if self.es.sequence(base) else None
        board = Board(dims, self.es, {n: () for n in rule.combined_names()})
        env_cache: dict[Value, bool] = {}

        def marker(value: Value) -> bool:
            if value in env_cache:
                return env_cache[value]
            ev = Evaluator(rule, board, _MarkerProbe(sample, value), self.env)
            got = ev.eval(pred, {var: (sample, base)})
            if got is UNKNOWN:
                raise EvalError("marker predicate did not decide")
            out = got if polarity else not got
            env_cache[value] = out
            return out

        return marker

    # -- grounding ----------------------------------------------------------

    def ground(self, board: Board, inst_ids: dict, constraints) -> Optional[list[Atom]]:
        """Expand constraints over a concrete selection into atoms with
        their variable scopes.  Returns None when the selection is already
        contradictory (some atom is concretely false with no variables
        assigned)."""
        rec = Recorder(self, inst_ids)
        ev = Evaluator(self.rule, board, rec, self.env)
        pieces: list[tuple[Expr, dict]] = []

        def expand(expr: Expr, env: dict):
            if isinstance(expr, And):
                expand(expr.left, env)
                expand(expr.right, env)
                return
            if isinstance(expr, ForAll):
                coll = ev.eval(expr.coll, env)
                if isinstance(coll, Coll) and not coll.maybe:
                    for member in coll.items:
                        inner = dict(env)
                        inner[expr.var] = ev._bind(coll, member)
                        expand(expr.body, inner)
                    return
            pieces.append((expr, env))

        for cexpr in constraints:
            expand(cexpr, {})

        atoms: list[Atom] = []
        for expr, env in pieces:
            rec.touched = set()
            v = ev.eval(expr, env)
            if v is False:
                return None
            if v is True:
                continue
            atoms.append(Atom(expr, env, frozenset(rec.touched)))
        return atoms
