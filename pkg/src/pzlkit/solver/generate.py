"""Randomized construction of completed boards.

Each attempt samples selections structure-first (random partitions for
fill families, random marker regions for derived families, a random
simply-connected polyomino boundary for loop-shaped rules), then runs the
shared value search with seeded value ordering, and finally re-checks the
candidate with the strict evaluator, which is the sole acceptance
authority.  Attempts are deterministic functions of (rule, dims, seed,
attempt index), so the whole generation is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..board import Assignment, Board, CompletedBoard
from ..errors import BudgetExceededError, EvalError
from ..graphs import adjacency_masks, family_instances
from ..grid import GridDims, hp, vp
from ..semantics import Evaluator
from ..structure import Seq, sort_key
from ..relations import RelationKind
from .engine import StopSearch, _Nodes, block_ok, canonical_key, value_search
from .model import DerivedPlan, ExplicitPlan, FillPlan, SearchConfig, SearchModel
from .rng import SplitMix64, derive
from .subsets import bits, sample_connected

_BLOCK_RETRIES = 24
_REGION_RETRIES = 8


@dataclass
class GenerationResult:
    boards: list
    attempts: int
    nodes_used: int
    budget_exhausted: bool


def _sample_fill(model: SearchModel, plan: FillPlan, rng: SplitMix64, nodes: _Nodes):
    base = model.es.sequence(plan.base)
    n = len(base)
    adj = {f: adjacency_masks(base, plan.relations[f]) for f in plan.families}
    uncovered = (1 << n) - 1
    blocks = {f: [] for f in plan.families}
    while uncovered:
        seed = (uncovered & -uncovered).bit_length() - 1
        for _ in range(_BLOCK_RETRIES):
            nodes.spend("sampling partitions")
            family = plan.families[rng.randrange(len(plan.families))]
            cap = plan.size_caps.get(family)
            floor = plan.size_floors.get(family, 1)
            remaining = uncovered.bit_count()
            maxsize = remaining if cap is None else min(cap, remaining)
            if maxsize < floor:
                continue
            size = floor + rng.randrange(maxsize - floor + 1)
            bmask = sample_connected(seed, uncovered, adj[family], size, rng)
            if bmask is None:
                continue
            block = Seq(base[i] for i in bits(bmask))
            if not block_ok(model, family, plan.checks[family], block):
                continue
            blocks[family].append(block)
            uncovered &= ~bmask
            break
        else:
            return None
    return {f: tuple(sorted(blocks[f], key=sort_key)) for f in plan.families}


def _sample_loop(model: SearchModel, plan: DerivedPlan, rng: SplitMix64, nodes: _Nodes):
    """A random simply-connected polyomino; its boundary edges form one
    closed loop, which becomes the single selected instance."""
    m, n = model.dims
    cells = model.es.C
    adj = adjacency_masks(cells, {RelationKind.H, RelationKind.V})
    total = m * n
    for _ in range(_REGION_RETRIES):
        nodes.spend("sampling a loop")
        size = rng.randrange(total) + 1
        seed = rng.randrange(total)
        poly = sample_connected(seed, (1 << total) - 1, adj, size, rng)
        if poly is None:
            continue
        if _has_hole(model.dims, cells, poly):
            continue
        inside = {cells[i] for i in bits(poly)}

        def cell_in(i: int, j: int) -> bool:
            return 1 <= i <= m and 1 <= j <= n and _cell(cells, n, i, j) in inside

        edges = []
        for e in model.es.Hp:
            above = cell_in(e.i - 1, e.j)
            below = cell_in(e.i, e.j)
            if above != below:
                edges.append(e)
        for e in model.es.Vp:
            left = cell_in(e.i, e.j - 1)
            right = cell_in(e.i, e.j)
            if left != right:
                edges.append(e)
        return (Seq(sorted(edges)),)
    return None


def _cell(cells, n: int, i: int, j: int):
    return cells[(i - 1) * n + (j - 1)]


def _has_hole(dims: GridDims, cells, poly: int) -> bool:
    m, n = dims
    total = m * n
    comp = ((1 << total) - 1) & ~poly
    if comp == 0:
        return False
    border = 0
    for idx in bits(comp):
        e = cells[idx]
        if e.i in (1, m) or e.j in (1, n):
            border |= 1 << idx
    if border == 0:
        return True
    adj = adjacency_masks(cells, {RelationKind.H, RelationKind.V})
    reach = border
    frontier = border
    while frontier:
        grow = 0
        for v in bits(frontier):
            grow |= adj[v]
        grow &= comp & ~reach
        reach |= grow
        frontier = grow
    return reach != comp


def _quota_count(model: SearchModel, plan: DerivedPlan, selection: dict):
    """When fill families carry per-instance marker quotas over this plan's
    marker alphabet, the total marker count is pinned."""
    if plan.exact_size is None:
        return None
    member_set = frozenset(plan.member_values)
    totals = set()
    for family, k, values in model.marker_quotas:
        if values != member_set or family not in selection:
            continue
        totals.add(k * len(selection[family]))
    if not totals:
        return None
    if len(totals) > 1:
        return -1  # inconsistent quotas: no board from this sample
    total = totals.pop()
    if total % plan.exact_size:
        return -1
    return total // plan.exact_size


def _sample_derived(
    model: SearchModel, plan: DerivedPlan, rng: SplitMix64, nodes: _Nodes, selection: dict
):
    if plan.loop_shaped:
        got = _sample_loop(model, plan, rng, nodes)
        if got is not None and plan.count_hint not in (None, len(got)):
            return None
        return got
    base = model.es.sequence(plan.base)
    n = len(base)
    if not plan.member_values:
        return () if plan.count_hint in (None, 0) else None
    adj = adjacency_masks(base, plan.relations)
    pinned = _quota_count(model, plan, selection)
    if pinned == -1:
        return None
    if pinned is not None:
        count = pinned
    elif plan.count_hint is not None:
        count = plan.count_hint
    else:
        upper = max(1, n // (plan.exact_size or 2))
        count = rng.randrange(upper + 1)
    available = (1 << n) - 1
    instances = []
    for _ in range(count):
        placed = False
        for _ in range(_REGION_RETRIES):
            nodes.spend("sampling regions")
            if available == 0:
                break
            options = list(bits(available))
            seed = rng.choice(options)
            room = available.bit_count()
            if plan.exact_size is not None:
                size = plan.exact_size
            elif plan.count_hint == 1:
                # a lone region may need to span most of the board
                size = rng.randrange(room) + 1
            else:
                size = rng.randrange(min(room, max(1, n // 3))) + 1
            if size > room:
                continue
            bmask = sample_connected(seed, available, adj, size, rng)
            if bmask is None:
                continue
            instances.append(Seq(base[i] for i in bits(bmask)))
            available &= ~bmask
            placed = True
            break
        if not placed:
            if plan.count_hint is not None or pinned is not None:
                return None
            return tuple(sorted(instances, key=sort_key))
    return tuple(sorted(instances, key=sort_key))


def _sample_explicit(model: SearchModel, plan: ExplicitPlan, rng: SplitMix64, nodes: _Nodes):
    spec = model.rule.family_spec(plan.family)
    instances = [
        inst
        for inst in family_instances(spec, model.dims, budget=nodes.budget)
        if block_ok(model, plan.family, plan.checks, inst)
    ]
    if plan.count_hint is not None:
        k = plan.count_hint
        if k > len(instances):
            return None
    else:
        k = rng.randrange(min(len(instances), 6) + 1)
    picked: list = []
    pool = list(instances)
    for _ in range(k):
        nodes.spend("sampling selections")
        picked.append(pool.pop(rng.randrange(len(pool))))
    return tuple(sorted(picked, key=sort_key))


def _attempt(model: SearchModel, rng: SplitMix64, nodes: _Nodes):
    rule = model.rule
    selection = {f: () for f in rule.combined_names()}
    elem_domains = list(model.elem_domain)

    # derived families sample last: their marker counts may be pinned by
    # quotas over the fill selections
    ordered = [p for p in model.plans if not isinstance(p, DerivedPlan)]
    ordered += [p for p in model.plans if isinstance(p, DerivedPlan)]
    for plan in ordered:
        if isinstance(plan, FillPlan):
            part = _sample_fill(model, plan, rng, nodes)
            if part is None:
                return None
            selection.update(part)
        elif isinstance(plan, DerivedPlan):
            insts = _sample_derived(model, plan, rng, nodes, selection)
            if insts is None:
                return None
            selection[plan.family] = insts
            base = model.es.sequence(plan.base)
            member_set = set()
            for inst in insts:
                member_set.update(inst.members)
            for e in base:
                idx = model.elem_index[e]
                allowed = plan.member_values if e in member_set else plan.nonmember_values
                dom = tuple(v for v in elem_domains[idx] if v in allowed)
                if not dom:
                    return None
                elem_domains[idx] = dom
        else:
            insts = _sample_explicit(model, plan, rng, nodes)
            if insts is None:
                return None
            selection[plan.family] = insts

    board = Board(model.dims, model.es, selection)
    inst_families = {f: rule.domain_values(f, model.env) for f in rule.combined_names()}

    value_orders: dict = {}

    def order_values(vid: int, dom: tuple):
        got = value_orders.get(vid)
        if got is None or len(got) != len(dom):
            got = tuple(rng.shuffle(list(dom)))
            value_orders[vid] = got
        return got

    hits: list = []

    def leaf(values: list, inst_vals: dict) -> None:
        hits.append((list(values), dict(inst_vals)))
        raise StopSearch()

    try:
        value_search(
            model,
            board,
            rule.constraints,
            elem_domains,
            inst_families,
            nodes,
            leaf,
            order_values,
        )
    except StopSearch:
        pass
    if not hits:
        return None
    values, inst_vals = hits[0]
    asg = Assignment({e: values[i] for i, e in enumerate(model.elements)}, inst_vals)
    try:
        ok = Evaluator(rule, board, asg, model.env).check_all()
    except EvalError:
        return None
    if ok is not True:
        return None
    return CompletedBoard(board, asg)





def generate_completed(rule, config: SearchConfig) -> GenerationResult:
    """Up to ``limit`` distinct completed boards; deterministic in
    (rule, dims, seed).  Budget exhaustion is flagged on the result rather
    than raised, so partial output remains usable."""
    model = SearchModel(rule, config.dims)
    results: list[CompletedBoard] = []
    seen: set = set()
    exhausted = False
    attempts = 0
    used = 0
    max_attempts = max(64, config.limit * 96)
    slice_size = max(4000, config.node_budget // 64)
    while len(results) < config.limit and attempts < max_attempts:
        remaining = config.node_budget - used
        if remaining <= 0:
            exhausted = True
            break
        rng = SplitMix64(derive(config.seed, attempts))
        sub = _Nodes(min(slice_size, remaining))
        try:
            cb = _attempt(model, rng, sub)
        except BudgetExceededError:
            cb = None
        used += sub.used
        attempts += 1
        if cb is None:
            continue
        key = canonical_key(rule, cb)
        if key in seen:
            continue
        seen.add(key)
        results.append(cb)
    return GenerationResult(results, attempts, used, exhausted)
