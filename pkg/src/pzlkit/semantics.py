"""Constraint evaluation over (board, assignment) pairs.

One evaluator serves two callers: strict evaluation of a complete
assignment (the acceptance authority for generated boards) and
three-valued evaluation during search, where unassigned members read as
``UNKNOWN`` and any constraint that cannot yet be decided stays unknown
instead of failing.  Logical connectives short-circuit only on concrete
operands, so an expression's unknown-ness is never hidden by evaluation
order; aggregations always walk every member.

The helper functions (cross, cycle, all_different, shape_check,
connect_fn, no_overlap, fill) are also usable directly.
"""

from __future__ import annotations

from .board import Assignment, Board, board_members, instance_lookup
from .dsl.ast import (
    And,
    Arith,
    BoardOf,
    Builtin,
    Compare,
    ConnectTo,
    CountExpr,
    Exists,
    Expr,
    FilterExpr,
    ForAll,
    Iff,
    Implies,
    Literal,
    MembersOf,
    Not,
    Or,
    ProdExpr,
    RegionContaining,
    Rule,
    SizeOf,
    SolutionOf,
    SumExpr,
    Var,
)
from .errors import AmbiguousRegionError, EvalError, EvalTypeError
from .grid import Element, Kind, hp, vp
from .relations import related_any
from .structure import Seq, Structure, flatten
from .values import NULL, Value, is_int


class _Unknown:
    __slots__ = ()

    def __repr__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()

_GROUP_OF_BASE = {
    "P": "P", "C": "C", "Ep": "Ep", "Ec": "Ec",
    "Hp": "Ep", "Vp": "Ep", "Hc": "Ec", "Vc": "Ec",
}


def cross(board: Board, asg, point: Element) -> int | _Unknown:
    """Sum of the values on the four point edges meeting at a grid point;
    edges off the board contribute 0."""
    if point.kind is not Kind.P:
        raise EvalTypeError(f"cross expects a grid point, got {point!r}")
    i, j = point.i, point.j
    return _edge_sum(board, asg, (hp(i, j - 1), hp(i, j), vp(i - 1, j), vp(i, j)))


def cycle(board: Board, asg, cell: Element) -> int | _Unknown:
    """Sum of the values on the four point edges around a cell, with the
    same off-board guard as cross."""
    if cell.kind is not Kind.C:
        raise EvalTypeError(f"cycle expects a cell, got {cell!r}")
    i, j = cell.i, cell.j
    return _edge_sum(board, asg, (hp(i, j), hp(i + 1, j), vp(i, j), vp(i, j + 1)))


def _edge_sum(board: Board, asg, probes) -> int | _Unknown:
    total = 0
    unknown = False
    for e in probes:
        if e not in board.elements:
            continue
        v = asg.value_of_element(e)
        if v is UNKNOWN:
            unknown = True
            continue
        if not is_int(v):
            raise EvalTypeError(f"edge {e!r} carries non-integer value {v!r}")
        total += v
    return UNKNOWN if unknown else total


def all_different(values) -> bool | _Unknown:
    """Pairwise distinctness; a duplicate among the known values decides
    False even while other values are still unknown."""
    vals = list(values)
    seen = []
    unknown = False
    for v in vals:
        if v is UNKNOWN:
            unknown = True
            continue
        for w in seen:
            if _values_equal(v, w):
                return False
        seen.append(v)
    return UNKNOWN if unknown else True


def _values_equal(a, b) -> bool:
    if isinstance(a, (Element, Seq)) or isinstance(b, (Element, Seq)):
        return a == b
    return a is b or a == b


def shape_check(x: Structure, shape: str) -> bool:
    """Whether a structure's leaves tile a full rectangle (or square) when
    arranged on the board.  Leaves must share one element kind."""
    leaves = flatten(x)
    if not leaves:
        raise EvalTypeError(f"{shape} check on an empty structure")
    if len({e.kind for e in leaves}) != 1:
        raise EvalTypeError(f"{shape} check needs a single-kind structure")
    rows = [e.i for e in leaves]
    cols = [e.j for e in leaves]
    height = max(rows) - min(rows) + 1
    width = max(cols) - min(cols) + 1
    is_rect = height * width == len(leaves)
    if shape == "rectangle":
        return is_rect
    if shape == "square":
        return is_rect and height == width
    raise ValueError(f"unknown shape {shape!r}")


def connect_fn(board: Board, x: Structure, relations, family: str):
    """All board members of ``family`` other than x that stand in one of
    the given relations to x."""
    return tuple(
        s
        for s in board_members(board, family)
        if s != x and related_any(relations, s, x)
    )


def _flat_sets(board: Board, cache: dict, instances):
    out = []
    for inst in instances:
        fs = cache.get(inst)
        if fs is None:
            fs = frozenset(flatten(inst))
            cache[inst] = fs
        out.append(fs)
    return out


def no_overlap(board: Board, families, cache: dict | None = None) -> bool:
    """Pairwise disjointness of the flattened selections, pooled over one
    or more families."""
    if isinstance(families, str):
        families = (families,)
    instances = [s for f in families for s in board_members(board, f)]
    sets = _flat_sets(board, cache if cache is not None else {}, instances)
    seen: set = set()
    for fs in sets:
        if seen & fs:
            return False
        seen |= fs
    return True


def fill(board: Board, rule: Rule, families, cache: dict | None = None) -> bool:
    """no_overlap over the pooled selections, and together they cover the
    entire base element sequence the families are built from."""
    if isinstance(families, str):
        families = (families,)
    groups = set()
    for f in families:
        spec = rule.family_spec(f)
        groups.add(_GROUP_OF_BASE[spec.root_base()])
    if len(groups) != 1:
        raise EvalTypeError(f"fill over mixed base kinds: {sorted(groups)}")
    if not no_overlap(board, families, cache):
        return False
    covered: set = set()
    for f in families:
        for fs in _flat_sets(board, cache if cache is not None else {}, board_members(board, f)):
            covered |= fs
    target = set(board.elements.sequence(groups.pop()))
    return covered == target


class Coll:
    """A collection value: definite members plus members whose inclusion
    cannot be decided yet (three-valued filters)."""

    __slots__ = ("items", "family", "maybe")

    def __init__(self, items, family=None, maybe=()):
        self.items = tuple(items)
        self.family = family
        self.maybe = tuple(maybe)


class Evaluator:
    """Evaluates expressions against one board.

    ``asg`` may be any object exposing ``value_of_element`` and
    ``instance_value``; values may be ``UNKNOWN`` to request three-valued
    semantics.  The board's selections are always concrete.
    """

    def __init__(self, rule: Rule, board: Board, asg, params: dict | None = None):
        self.rule = rule
        self.board = board
        self.asg = asg
        self.params = params if params is not None else rule.size_env(board.dims)
        self._slots = instance_lookup(board)
        self._flat_cache: dict = {}

    # -- entry points ----------------------------------------------------

    def check(self, expr: Expr):
        """Three-valued truth of a constraint: True, False or UNKNOWN."""
        v = self.eval(expr, {})
        if v is UNKNOWN or isinstance(v, bool):
            return v
        raise EvalTypeError(f"constraint evaluated to non-boolean {v!r}")

    def check_all(self):
        """Conjunction of every rule constraint."""
        result = True
        for cexpr in self.rule.constraints:
            v = self.check(cexpr)
            if v is False:
                return False
            if v is UNKNOWN:
                result = UNKNOWN
        return result

    # -- dispatch ---------------------------------------------------------

    def eval(self, expr: Expr, env: dict):
        method = _DISPATCH[type(expr)]
        return method(self, expr, env)

    def _coll(self, expr: Expr, env: dict) -> Coll:
        v = self.eval(expr, env)
        if not isinstance(v, Coll):
            raise EvalTypeError(f"expected a collection, got {v!r}")
        return v

    def _bind(self, coll: Coll, member):
        if coll.family is not None:
            return (member, coll.family)
        if isinstance(member, Element):
            return (member, self.board.elements.group_of(member))
        return (member, None)

    # -- leaves -----------------------------------------------------------

    def _literal(self, expr: Literal, env):
        return expr.value

    def _var(self, expr: Var, env):
        if expr.name in env:
            return env[expr.name][0]
        if expr.name in self.params:
            return self.params[expr.name]
        raise EvalError(f"unbound variable {expr.name!r}")

    # -- arithmetic and comparison -----------------------------------------

    def _arith(self, expr: Arith, env):
        a = self.eval(expr.left, env)
        b = self.eval(expr.right, env)
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        if not is_int(a) or not is_int(b):
            raise EvalTypeError(f"arithmetic on non-integers: {a!r} {expr.op} {b!r}")
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "^":
            return a**b
        raise EvalError(f"unknown operator {expr.op!r}")

    def _compare(self, expr: Compare, env):
        a = self.eval(expr.left, env)
        b = self.eval(expr.right, env)
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        if expr.op in ("<", "<="):
            if not is_int(a) or not is_int(b):
                raise EvalTypeError(f"ordering on non-integers: {a!r} {expr.op} {b!r}")
            return a < b if expr.op == "<" else a <= b
        eq = _values_equal(a, b)
        return eq if expr.op == "==" else not eq


    # -- connectives (Kleene; short-circuit only on concrete operands) ------

    def _bool(self, v):
        if v is UNKNOWN or isinstance(v, bool):
            return v
        raise EvalTypeError(f"expected a truth value, got {v!r}")

    def _not(self, expr: Not, env):
        v = self._bool(self.eval(expr.expr, env))
        return UNKNOWN if v is UNKNOWN else not v

    def _and(self, expr: And, env):
        a = self._bool(self.eval(expr.left, env))
        if a is False:
            return False
        b = self._bool(self.eval(expr.right, env))
        if b is False:
            return False
        return UNKNOWN if UNKNOWN in (a, b) else True

    def _or(self, expr: Or, env):
        a = self._bool(self.eval(expr.left, env))
        if a is True:
            return True
        b = self._bool(self.eval(expr.right, env))
        if b is True:
            return True
        return UNKNOWN if UNKNOWN in (a, b) else False

    def _implies(self, expr: Implies, env):
        a = self._bool(self.eval(expr.left, env))
        if a is False:
            return True
        b = self._bool(self.eval(expr.right, env))
        if b is True:
            return True
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        return b

    def _iff(self, expr: Iff, env):
        a = self._bool(self.eval(expr.left, env))
        b = self._bool(self.eval(expr.right, env))
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        return a == b

    # -- quantifiers and aggregation ----------------------------------------

    def _forall(self, expr: ForAll, env):
        coll = self._coll(expr.coll, env)
        unknown = bool(coll.maybe)
        for member in coll.items:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            v = self._bool(self.eval(expr.body, inner))
            if v is False:
                return False
            if v is UNKNOWN:
                unknown = True
        for member in coll.maybe:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            self.eval(expr.body, inner)
        return UNKNOWN if unknown else True

    def _exists(self, expr: Exists, env):
        coll = self._coll(expr.coll, env)
        unknown = bool(coll.maybe)
        for member in coll.items:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            v = self._bool(self.eval(expr.body, inner))
            if v is True:
                return True
            if v is UNKNOWN:
                unknown = True
        for member in coll.maybe:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            self.eval(expr.body, inner)
        return UNKNOWN if unknown else False

    def _aggregate(self, expr, env, start, op):
        coll = self._coll(expr.coll, env)
        total = start
        unknown = bool(coll.maybe)
        for member in coll.items + coll.maybe:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            v = self.eval(expr.body, inner)
            if v is UNKNOWN:
                unknown = True
                continue
            if not is_int(v):
                raise EvalTypeError(f"aggregation over non-integer {v!r}")
            total = op(total, v)
        return UNKNOWN if unknown else total

    def _sum(self, expr: SumExpr, env):
        return self._aggregate(expr, env, 0, lambda a, b: a + b)

    def _prod(self, expr: ProdExpr, env):
        return self._aggregate(expr, env, 1, lambda a, b: a * b)

    def _count(self, expr: CountExpr, env):
        coll = self._coll(expr.coll, env)
        if coll.maybe:
            return UNKNOWN
        return len(coll.items)

    # -- structure access ----------------------------------------------------

    def _size(self, expr: SizeOf, env):
        v = self.eval(expr.expr, env)
        if isinstance(v, Seq):
            return len(v.members)
        if isinstance(v, Element):
            return 1
        if v is UNKNOWN:
            return UNKNOWN
        raise EvalTypeError(f"size of non-structure {v!r}")

    def _solution(self, expr: SolutionOf, env):
        v = self.eval(expr.expr, env)
        if isinstance(v, Element):
            return self.asg.value_of_element(v)
        if isinstance(v, Seq):
            slots = self._slots.get(v)
            if not slots:
                raise EvalTypeError(f"structure {v!r} is not on the board")
            # one structure may be selected in several families (a full row
            # can be both a line and a room); the binder's family decides
            family = self._binding_family(expr.expr, env)
            if family is not None:
                slots = [s for s in slots if s[0] == family] or slots
            vals = [self.asg.instance_value(f, i) for f, i in slots]
            if any(w is UNKNOWN for w in vals):
                return UNKNOWN
            first = vals[0]
            if any(not _values_equal(first, w) for w in vals[1:]):
                raise AmbiguousRegionError(
                    f"structure {v!r} has conflicting values in several families"
                )
            return first
        if v is UNKNOWN:
            return UNKNOWN
        raise EvalTypeError(f"solution of non-structure {v!r}")

    def _binding_family(self, expr: Expr, env):
        if isinstance(expr, Var) and expr.name in env:
            return env[expr.name][1]
        if isinstance(expr, RegionContaining):
            return expr.family
        return None

    def _board_of(self, expr: BoardOf, env):
        return Coll(board_members(self.board, expr.family), expr.family)

    def _members_of(self, expr: MembersOf, env):
        v = self.eval(expr.expr, env)
        if isinstance(v, Seq):
            return Coll(v.members)
        if isinstance(v, Element):
            return Coll((v,))
        raise EvalTypeError(f"members of non-structure {v!r}")

    def _connect(self, expr: ConnectTo, env):
        family = self._family_of(expr.expr, env)
        v = self.eval(expr.expr, env)
        if not isinstance(v, (Element, Seq)):
            raise EvalTypeError(f"connect on non-structure {v!r}")
        return Coll(connect_fn(self.board, v, expr.relations, family), family)

    def _family_of(self, expr: Expr, env) -> str:
        if isinstance(expr, Var) and expr.name in env:
            fam = env[expr.name][1]
            if fam is not None:
                return fam
            obj = env[expr.name][0]
            if isinstance(obj, Element):
                return self.board.elements.group_of(obj)
            raise EvalTypeError(f"cannot infer the family of {expr.name!r} for connect")
        if isinstance(expr, RegionContaining):
            return expr.family
        v = self.eval(expr, env)
        if isinstance(v, Element):
            return self.board.elements.group_of(v)
        raise EvalTypeError("cannot infer the family for connect")

    def _region(self, expr: RegionContaining, env):
        e = self.eval(expr.expr, env)
        if not isinstance(e, Element):
            raise EvalTypeError(f"region expects an element, got {e!r}")
        hits = []
        for inst in board_members(self.board, expr.family):
            fs = self._flat_cache.get(inst)
            if fs is None:
                fs = frozenset(flatten(inst))
                self._flat_cache[inst] = fs
            if e in fs:
                hits.append(inst)
        if not hits:
            return NULL
        if len(hits) > 1:
            raise AmbiguousRegionError(
                f"{e!r} lies in {len(hits)} instances of {expr.family!r}"
            )
        return hits[0]

    def _filter(self, expr: FilterExpr, env):
        coll = self._coll(expr.coll, env)
        items = []
        maybe = list(coll.maybe)
        for member in coll.items:
            inner = dict(env)
            inner[expr.var] = self._bind(coll, member)
            v = self._bool(self.eval(expr.predicate, inner))
            if v is True:
                items.append(member)
            elif v is UNKNOWN:
                maybe.append(member)
        return Coll(items, coll.family, maybe)

    # -- builtins -------------------------------------------------------------

    def _builtin(self, expr: Builtin, env):
        name = expr.name
        if name == "cross":
            e = self.eval(expr.args[0], env)
            if not isinstance(e, Element):
                raise EvalTypeError(f"cross expects a grid point, got {e!r}")
            return cross(self.board, self.asg, e)
        if name == "cycle":
            e = self.eval(expr.args[0], env)
            if not isinstance(e, Element):
                raise EvalTypeError(f"cycle expects a cell, got {e!r}")
            return cycle(self.board, self.asg, e)
        if name == "all_different":
            v = self.eval(expr.args[0], env)
            if isinstance(v, Coll):
                if v.maybe:
                    return UNKNOWN
                vals = [self._value_of_member(s) for s in v.items]
            elif isinstance(v, Seq):
                vals = [self._value_of_member(s) for s in v.members]
            else:
                raise EvalTypeError(f"all_different on {v!r}")
            return all_different(vals)
        if name in ("is_rectangle", "is_square"):
            v = self.eval(expr.args[0], env)
            if v is UNKNOWN:
                return UNKNOWN
            if not isinstance(v, (Seq, Element)):
                raise EvalTypeError(f"{name} on non-structure {v!r}")
            return shape_check(v, "rectangle" if name == "is_rectangle" else "square")
        if name == "no_overlap":
            return no_overlap(self.board, expr.args, self._flat_cache)
        if name == "fill":
            return fill(self.board, self.rule, expr.args, self._flat_cache)
        if name == "factorial":
            v = self.eval(expr.args[0], env)
            if v is UNKNOWN:
                return UNKNOWN
            if not is_int(v) or v < 0:
                raise EvalTypeError(f"factorial of {v!r}")
            import math

            return math.factorial(v)
        raise EvalError(f"unknown builtin {name!r}")

    def _value_of_member(self, s):
        if isinstance(s, Element):
            return self.asg.value_of_element(s)
        slots = self._slots.get(s)
        if not slots:
            raise EvalTypeError(f"structure {s!r} is not on the board")
        return self.asg.instance_value(*slots[0])


_DISPATCH = {
    Literal: Evaluator._literal,
    Var: Evaluator._var,
    Arith: Evaluator._arith,
    Compare: Evaluator._compare,
    Not: Evaluator._not,
    And: Evaluator._and,
    Or: Evaluator._or,
    Implies: Evaluator._implies,
    Iff: Evaluator._iff,
    ForAll: Evaluator._forall,
    Exists: Evaluator._exists,
    SumExpr: Evaluator._sum,
    ProdExpr: Evaluator._prod,
    CountExpr: Evaluator._count,
    SizeOf: Evaluator._size,
    SolutionOf: Evaluator._solution,
    BoardOf: Evaluator._board_of,
    MembersOf: Evaluator._members_of,
    ConnectTo: Evaluator._connect,
    RegionContaining: Evaluator._region,
    FilterExpr: Evaluator._filter,
    Builtin: Evaluator._builtin,
}


def eval_expr(rule: Rule, board: Board, asg, expr: Expr, params: dict | None = None):
    """Evaluate one expression strictly; boolean constraints return bool."""
    return Evaluator(rule, board, asg, params).eval(expr, {})


def satisfies(rule: Rule, board: Board, asg: Assignment, params: dict | None = None) -> bool:
    """Whether the assignment satisfies every constraint of the rule."""
    result = Evaluator(rule, board, asg, params).check_all()
    if result is UNKNOWN:
        raise EvalError("assignment is incomplete")
    return result
