"""Exhaustive search: complete, canonical enumeration of completed boards.

Selections for fill/explicit plans are enumerated outright; derived
families are read back from the values at each leaf (every decomposition
of the marker set into family instances is considered).  Ground atoms are
compiled to closures where possible and re-checked as their scopes fill
in, three-valued, so partial assignments fail as early as the semantics
allow.  Every emitted board passes one final strict evaluation of the
full constraint conjunction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from ..board import Assignment, Board, CompletedBoard, instance_lookup
from ..dsl.ast import Builtin, walk_expr
from ..errors import BudgetExceededError, EvalError
from ..graphs import adjacency_masks, family_instances
from ..grid import Element
from ..semantics import UNKNOWN, Evaluator
from ..structure import Seq, sort_key
from ..values import UNDECIDED, Value, value_sort_key
from .compiled import compile_check
from .model import (
    Atom,
    DerivedPlan,
    ExplicitPlan,
    FillPlan,
    Recorder,
    SearchConfig,
    SearchModel,
)
from .subsets import bits, connected_supersets, is_connected_in


class _Nodes:
    """Shared node counter with a hard budget."""

    __slots__ = ("used", "budget")

    def __init__(self, budget: int):
        self.used = 0
        self.budget = budget

    def spend(self, what: str) -> None:
        self.used += 1
        if self.used > self.budget:
            raise BudgetExceededError(
                f"search stopped after {self.budget} nodes while {what}",
                count=self.budget,
            )


class ArrayAssignment:
    """Mutable assignment view the search engine writes into."""

    __slots__ = ("model", "values", "inst")

    def __init__(self, model: SearchModel, values: list, inst: dict):
        self.model = model
        self.values = values
        self.inst = inst

    def value_of_element(self, e: Element):
        return self.values[self.model.elem_index[e]]

    def instance_value(self, family: str, idx: int):
        return self.inst[(family, idx)]


class _AllUnknown:
    def value_of_element(self, e):
        return UNKNOWN

    def instance_value(self, family, idx):
        return UNKNOWN


# --- selection enumeration ----------------------------------------------------


def block_ok(model: SearchModel, family: str, checks, block: Seq) -> bool:
    """Value-free per-instance checks against one candidate block.  The
    block is not on any board yet, so value reads that get past the
    three-valued short circuits abort the check rather than fail it."""
    bare = Board(model.dims, model.es, {f: () for f in model.rule.combined_names()})
    ev = Evaluator(model.rule, bare, _AllUnknown(), model.env)
    for chk in checks:
        try:
            verdict = ev.eval(chk.body, {chk.var: (block, family)})
        except EvalError:
            continue
        if verdict is False:
            return False
    return True


def _fill_partitions(model: SearchModel, plan: FillPlan, nodes: _Nodes) -> Iterator[dict]:
    base = model.es.sequence(plan.base)
    n = len(base)
    adj = {f: adjacency_masks(base, plan.relations[f]) for f in plan.families}

    def rec(uncovered: int, acc: dict):
        if uncovered == 0:
            yield {f: tuple(sorted(acc[f], key=sort_key)) for f in plan.families}
            return
        seed = (uncovered & -uncovered).bit_length() - 1
        for family in plan.families:
            cap = plan.size_caps.get(family)
            floor = plan.size_floors.get(family, 1)
            for bmask in connected_supersets(seed, uncovered, adj[family], cap):
                nodes.spend("enumerating partitions")
                if bmask.bit_count() < floor:
                    continue
                block = Seq(base[i] for i in bits(bmask))
                if not block_ok(model, family, plan.checks[family], block):
                    continue
                acc[family].append(block)
                yield from rec(uncovered & ~bmask, acc)
                acc[family].pop()

    yield from rec((1 << n) - 1, {f: [] for f in plan.families})


def _explicit_selections(
    model: SearchModel, plan: ExplicitPlan, nodes: _Nodes
) -> Iterator[dict]:
    spec = model.rule.family_spec(plan.family)
    instances = [
        inst
        for inst in family_instances(spec, model.dims, budget=nodes.budget)
        if block_ok(model, plan.family, plan.checks, inst)
    ]
    counts = [plan.count_hint] if plan.count_hint is not None else range(len(instances) + 1)
    for r in counts:
        if r > len(instances):
            continue
        for combo in itertools.combinations(instances, r):
            nodes.spend("enumerating selections")
            yield {plan.family: tuple(combo)}


def iter_selections(model: SearchModel, nodes: _Nodes) -> Iterator[dict]:
    """Cartesian product of the per-plan selection generators; derived
    families stay empty here."""
    gens = []
    for plan in model.plans:
        if isinstance(plan, FillPlan):
            gens.append(lambda p=plan: _fill_partitions(model, p, nodes))
        elif isinstance(plan, ExplicitPlan):
            gens.append(lambda p=plan: _explicit_selections(model, p, nodes))

    def rec(i: int, acc: dict):
        if i == len(gens):
            yield dict(acc)
            return
        for part in gens[i]():
            acc.update(part)
            yield from rec(i + 1, acc)

    yield from rec(0, {f: () for f in model.rule.combined_names()})


# --- derived reconstruction ----------------------------------------------------


def _decompositions(members: list, plan: DerivedPlan, nodes: _Nodes) -> Iterator[tuple]:
    """All partitions of the marker set into connected family instances,
    honouring the plan's exact block size and instance-count hints."""
    n = len(members)
    if n == 0:
        if plan.count_hint in (None, 0):
            yield ()
        return
    if plan.count_hint == 0:
        return
    adj = adjacency_masks(members, plan.relations)

    def to_seq(mask: int) -> Seq:
        return Seq(members[i] for i in bits(mask))

    def rec(remaining: int, acc: list):
        if remaining == 0:
            if plan.count_hint is None or len(acc) == plan.count_hint:
                yield tuple(acc)
            return
        if plan.count_hint is not None and len(acc) >= plan.count_hint:
            return
        if plan.count_hint is not None and len(acc) == plan.count_hint - 1:
            if plan.exact_size is not None and remaining.bit_count() != plan.exact_size:
                return
            nodes.spend("reconstructing instances")
            if is_connected_in(remaining, adj):
                yield tuple(acc + [to_seq(remaining)])
            return
        seed = (remaining & -remaining).bit_length() - 1
        for bmask in connected_supersets(seed, remaining, adj, plan.exact_size):
            if plan.exact_size is not None and bmask.bit_count() != plan.exact_size:
                continue
            nodes.spend("reconstructing instances")
            acc.append(to_seq(bmask))
            yield from rec(remaining & ~bmask, acc)
            acc.pop()

    yield from rec((1 << n) - 1, [])


def derived_selections(model: SearchModel, values: list, nodes: _Nodes) -> Iterator[dict]:
    plans = [p for p in model.plans if isinstance(p, DerivedPlan)]
    if not plans:
        yield {}
        return

    def rec(i: int, acc: dict):
        if i == len(plans):
            yield dict(acc)
            return
        plan = plans[i]
        members = [
            e
            for e in model.es.sequence(plan.base)
            if plan.marker(values[model.elem_index[e]])
        ]
        for decomp in _decompositions(members, plan, nodes):
            acc[plan.family] = decomp
            yield from rec(i + 1, acc)

    yield from rec(0, {})


# --- the value search shared by both engines -------------------------------------


@dataclass
class GivenValues:
    """A partial assignment used to restrict and test candidate boards."""

    elements: dict  # Element -> Value (UNDECIDED entries mean "free")
    instances: dict  # family -> tuple[Value, ...] expected per instance slot


class StopSearch(Exception):
    """Raised by a leaf callback to unwind the whole search."""


def value_search(
    model: SearchModel,
    board: Board,
    constraints,
    elem_domains: list,
    inst_families: dict,
    nodes: _Nodes,
    on_leaf: Callable,
    order_values: Optional[Callable] = None,
) -> None:
    """Backtracking over element and instance values for one fixed board.

    ``inst_families`` maps family name -> resolved value domain for its
    instances.  ``on_leaf(values, inst_vals)`` fires at every complete
    assignment that passed all ground checks.  ``order_values`` may reorder
    a domain per variable (the randomized engine's hook).
    """
    rule = model.rule
    n_elems = len(model.elements)

    inst_ids: dict = {}
    inst_domains: dict = {}
    next_id = n_elems
    for family, instances in board.selected.items():
        dom = inst_families.get(family)
        if dom is None:
            continue
        for idx in range(len(instances)):
            inst_ids[(family, idx)] = next_id
            inst_domains[next_id] = dom
            next_id += 1

    atoms = model.ground(board, inst_ids, constraints)
    if atoms is None:
        return

    values: list = [d[0] if len(d) == 1 else UNKNOWN for d in elem_domains]
    inst_vals: dict = {}
    id_to_slot: dict = {}
    for slot, vid in inst_ids.items():
        id_to_slot[vid] = slot
        dom = inst_domains[vid]
        inst_vals[slot] = dom[0] if len(dom) == 1 else UNKNOWN

    order: list[int] = [i for i in range(n_elems) if len(elem_domains[i]) > 1]
    order += [vid for vid in sorted(id_to_slot) if len(inst_domains[vid]) > 1]
    pos = {vid: i for i, vid in enumerate(order)}

    asg_view = ArrayAssignment(model, values, inst_vals)
    ev = Evaluator(rule, board, asg_view, model.env)
    instance_slots = instance_lookup(board)

    def make_check(atom: Atom):
        fn = compile_check(
            model,
            board,
            atom.expr,
            atom.env,
            values,
            inst_vals,
            inst_ids,
            lambda: Recorder(model, inst_ids),
            instance_slots,
        )
        if fn is not None:
            return fn
        return lambda a=atom: ev.eval(a.expr, a.env)

    def is_eager(atom: Atom) -> bool:
        return any(
            isinstance(n, Builtin) and n.name == "all_different"
            for n in walk_expr(atom.expr)
        )

    immediate = []
    atoms_at: list[list] = [[] for _ in order]
    for atom in atoms:
        check = make_check(atom)
        positions = sorted({pos[v] for v in atom.varids if pos.get(v, -1) >= 0})
        if not positions:
            immediate.append(check)
        elif is_eager(atom):
            for p in positions:
                atoms_at[p].append(check)
        else:
            atoms_at[positions[-1]].append(check)

    if any(chk() is False for chk in immediate):
        return

    def domain_of(vid: int):
        dom = elem_domains[vid] if vid < n_elems else inst_domains[vid]
        if order_values is not None:
            return order_values(vid, dom)
        return dom

    def set_var(vid: int, val) -> None:
        if vid < n_elems:
            values[vid] = val
        else:
            inst_vals[id_to_slot[vid]] = val

    def search(i: int) -> None:
        if i == len(order):
            on_leaf(values, inst_vals)
            return
        vid = order[i]
        checks = atoms_at[i]
        for val in domain_of(vid):
            nodes.spend("assigning values")
            set_var(vid, val)
            if all(chk() is not False for chk in checks):
                search(i + 1)
        set_var(vid, UNKNOWN)

    search(0)


def restricted_elem_domains(model: SearchModel, given: Optional[GivenValues]) -> Optional[list]:
    out = []
    for i, e in enumerate(model.elements):
        dom = model.elem_domain[i]
        if given is not None:
            pin = given.elements.get(e, UNDECIDED)
            if pin is not UNDECIDED:
                dom = tuple(v for v in dom if v is pin or v == pin)
        if not dom:
            return None
        out.append(dom)
    return out


def matches_given(board: Board, asg: Assignment, given: GivenValues) -> bool:
    for family, expected in given.instances.items():
        actual = board.selected.get(family, ())
        if len(actual) != len(expected):
            return False
        for idx, want in enumerate(expected):
            if want is UNDECIDED:
                continue
            got = asg.instance_value(family, idx)
            if not (got is want or got == want):
                return False
    return True


def _solve(
    model: SearchModel,
    nodes: _Nodes,
    on_board: Callable,
    given: Optional[GivenValues] = None,
) -> None:
    """Exhaustive enumeration core: calls on_board for every completed
    board, unordered."""
    rule = model.rule
    elem_domains = restricted_elem_domains(model, given)
    if elem_domains is None:
        return

    inst_families = {
        f: rule.domain_values(f, model.env)
        for f in rule.combined_names()
        if f not in model.derived_families
    }

    for selection in iter_selections(model, nodes):
        board = Board(model.dims, model.es, selection)

        def leaf(values: list, inst_vals: dict) -> None:
            for dsel in derived_selections(model, values, nodes):
                final_sel = dict(selection)
                final_sel.update(dsel)
                final_board = Board(model.dims, model.es, final_sel)
                elem_map = {e: values[i] for i, e in enumerate(model.elements)}
                slots = []
                for family, instances in dsel.items():
                    dom = rule.domain_values(family, model.env)
                    slots.extend(((family, idx), dom) for idx in range(len(instances)))
                for combo in itertools.product(*(dom for _, dom in slots)):
                    iv = dict(inst_vals)
                    for (slot, _), val in zip(slots, combo):
                        iv[slot] = val
                    asg = Assignment(elem_map, iv)
                    if given is not None and not matches_given(final_board, asg, given):
                        continue
                    try:
                        ok = Evaluator(rule, final_board, asg, model.env).check_all()
                    except EvalError:
                        continue
                    if ok is True:
                        on_board(CompletedBoard(final_board, asg))

        value_search(
            model,
            board,
            model.groundable,
            elem_domains,
            inst_families,
            nodes,
            leaf,
        )


def completed_sort_key(rule, cb: CompletedBoard):
    """Ordering key (board order, then assignment order); not hashable."""
    board_key = tuple(
        tuple(sort_key(inst) for inst in cb.board.selected.get(f, ()))
        for f in rule.combined_names()
    )
    asg_key = tuple(value_sort_key(v) for v in cb.assignment.sequence(cb.board))
    return (board_key, asg_key)


def canonical_key(rule, cb: CompletedBoard) -> tuple:
    """Hashable identity of a completed board (for sets and deduping)."""
    boards = tuple(
        (f, tuple(repr(i) for i in cb.board.selected.get(f, ())))
        for f in rule.combined_names()
    )
    return (boards, tuple(repr(v) for v in cb.assignment.sequence(cb.board)))


def enumerate_completed(rule, config: SearchConfig) -> Iterator[CompletedBoard]:
    """Every completed board exactly once, in canonical order (board order,
    then assignment order).  This is the reference enumeration; budget
    exhaustion raises rather than silently truncating."""
    model = SearchModel(rule, config.dims)
    nodes = _Nodes(config.node_budget)
    found: list[CompletedBoard] = []
    _solve(model, nodes, found.append)
    found.sort(key=lambda cb: completed_sort_key(rule, cb))
    emitted = 0
    previous = None
    for cb in found:
        if previous is not None and cb == previous:
            continue
        previous = cb
        if emitted >= config.limit:
            return
        emitted += 1
        yield cb


class _Capped(Exception):
    pass


def count_consistent_nodes(
    rule,
    dims,
    given: Optional[GivenValues] = None,
    node_budget: Optional[int] = None,
    cap: Optional[int] = None,
) -> tuple[int, int]:
    """(count, nodes spent): like count_consistent, also reporting work."""
    from .model import default_node_budget

    model = SearchModel(rule, dims)
    nodes = _Nodes(node_budget if node_budget is not None else default_node_budget())
    count = [0]

    def note(cb: CompletedBoard) -> None:
        count[0] += 1
        if cap is not None and count[0] >= cap:
            raise _Capped()

    try:
        _solve(model, nodes, note, given)
    except _Capped:
        pass
    return count[0], nodes.used


def count_consistent(
    rule,
    dims,
    given: Optional[GivenValues] = None,
    node_budget: Optional[int] = None,
    cap: Optional[int] = None,
) -> int:
    """Number of completed boards whose solution extends ``given``.

    ``cap`` stops the count early (for callers that only distinguish
    0 / 1 / several); budget exhaustion raises BudgetExceededError.
    """
    return count_consistent_nodes(rule, dims, given, node_budget, cap)[0]
