"""Closure compilation of ground atoms.

Atom checks run millions of times during search, so the common shapes are
lowered to closures over the engine's value arrays: solution reads become
list indexing, cross/cycle become precomputed index sums, and any
subexpression that touches no decision variable is folded to a constant
using the ordinary evaluator.  Anything the compiler does not recognise
falls back to the evaluator, so compilation is purely an optimization of
the three-valued check.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..dsl.ast import (
    And,
    Arith,
    Builtin,
    Compare,
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
    SizeOf,
    SolutionOf,
    SumExpr,
    Var,
)
from ..errors import EvalError, EvalTypeError
from ..grid import Element, Kind, hp, vp
from ..semantics import UNKNOWN, Coll, Evaluator, _values_equal
from ..structure import Seq
from ..values import is_int

_BAIL = object()


class _Ctx:
    """Compilation context: the live arrays plus helpers for resolving
    structures to variable slots."""

    def __init__(self, model, board, values, inst_vals, inst_ids, recorder_factory, ev_unknown):
        self.model = model
        self.board = board
        self.values = values
        self.inst_vals = inst_vals
        self.inst_ids = inst_ids
        self.recorder_factory = recorder_factory
        self.ev = ev_unknown  # evaluator against an all-UNKNOWN assignment

    def scope_of(self, expr: Expr, env: dict) -> frozenset:
        rec = self.recorder_factory()
        Evaluator(self.model.rule, self.board, rec, self.model.env).eval(expr, env)
        return frozenset(rec.touched)

    def fold(self, expr: Expr, env: dict):
        """Evaluate a variable-free subexpression once."""
        return self.ev.eval(expr, env)

def compile_check(model, board, expr: Expr, env: dict, values, inst_vals,
                  inst_ids, recorder_factory, instance_slots) -> Optional[Callable]:
    """Compile one ground atom into a nullary closure returning the
    three-valued truth of the atom against the live arrays, or None when
    the shape is not supported."""
    ev_unknown = Evaluator(model.rule, board, _Unk(), model.env)
    ctx = _Ctx(model, board, values, inst_vals, inst_ids, recorder_factory, ev_unknown)
    ctx.instance_slots = instance_slots
    try:
        fn = _compile(ctx, expr, env)
    except _Bail:
        return None
    return fn


class _Unk:
    def value_of_element(self, e):
        return UNKNOWN

    def instance_value(self, family, idx):
        return UNKNOWN


class _Bail(Exception):
    pass


def _compile(ctx: _Ctx, expr: Expr, env: dict) -> Callable:
    # constant-fold anything that reads no decision variable
    scope = ctx.scope_of(expr, env)
    if not scope:
        try:
            const = ctx.fold(expr, env)
        except EvalError:
            raise _Bail()
        if const is UNKNOWN or isinstance(const, Coll):
            raise _Bail()
        return lambda: const

    if isinstance(expr, SolutionOf):
        return _compile_solution(ctx, expr.expr, env)
    if isinstance(expr, Compare):
        return _compile_compare(ctx, expr, env)
    if isinstance(expr, Arith):
        a = _compile(ctx, expr.left, env)
        b = _compile(ctx, expr.right, env)
        op = expr.op
        def arith():
            x = a()
            y = b()
            if x is UNKNOWN or y is UNKNOWN:
                return UNKNOWN
            if not is_int(x) or not is_int(y):
                raise EvalTypeError(f"arithmetic on non-integers: {x!r} {op} {y!r}")
            if op == "+":
                return x + y
            if op == "-":
                return x - y
            if op == "*":
                return x * y
            return x**y
        return arith
    if isinstance(expr, Not):
        f = _compile(ctx, expr.expr, env)

        def negate():
            v = f()
            return UNKNOWN if v is UNKNOWN else not v

        return negate
    if isinstance(expr, And):
        a = _compile(ctx, expr.left, env)
        b = _compile(ctx, expr.right, env)
        def conj():
            x = a()
            if x is False:
                return False
            y = b()
            if y is False:
                return False
            return UNKNOWN if (x is UNKNOWN or y is UNKNOWN) else True
        return conj
    if isinstance(expr, Or):
        a = _compile(ctx, expr.left, env)
        b = _compile(ctx, expr.right, env)
        def disj():
            x = a()
            if x is True:
                return True
            y = b()
            if y is True:
                return True
            return UNKNOWN if (x is UNKNOWN or y is UNKNOWN) else False
        return disj
    if isinstance(expr, Implies):
        a = _compile(ctx, expr.left, env)
        b = _compile(ctx, expr.right, env)
        def impl():
            x = a()
            if x is False:
                return True
            y = b()
            if y is True:
                return True
            if x is UNKNOWN or y is UNKNOWN:
                return UNKNOWN
            return y
        return impl
    if isinstance(expr, Iff):
        a = _compile(ctx, expr.left, env)
        b = _compile(ctx, expr.right, env)
        def iff():
            x = a()
            y = b()
            if x is UNKNOWN or y is UNKNOWN:
                return UNKNOWN
            return x == y
        return iff
    if isinstance(expr, Builtin) and expr.name in ("cross", "cycle"):
        return _compile_edge_sum(ctx, expr, env)
    if isinstance(expr, Builtin) and expr.name == "all_different":
        return _compile_all_different(ctx, expr.args[0], env)
    if isinstance(expr, CountExpr):
        items = _compile_coll(ctx, expr.coll, env)
        def count():
            n = 0
            for pred in items:
                v = pred()
                if v is UNKNOWN:
                    return UNKNOWN
                if v:
                    n += 1
            return n
        return count
    if isinstance(expr, (SumExpr, ProdExpr)):
        return _compile_aggregate(ctx, expr, env)
    if isinstance(expr, (ForAll, Exists)):
        return _compile_quantifier(ctx, expr, env)
    raise _Bail()


def _resolve_struct(ctx: _Ctx, expr: Expr, env: dict):
    """Resolve a structure-valued subexpression at compile time; its value
    must not depend on decision variables."""
    if isinstance(expr, Var):
        if expr.name in env:
            return env[expr.name][0]
        raise _Bail()
    if ctx.scope_of(expr, env):
        raise _Bail()
    try:
        out = ctx.fold(expr, env)
    except EvalError:
        raise _Bail()
    return out


def _compile_solution(ctx: _Ctx, target: Expr, env: dict) -> Callable:
    struct = _resolve_struct(ctx, target, env)
    values = ctx.values
    if isinstance(struct, Element):
        idx = ctx.model.elem_index.get(struct)
        if idx is None:
            raise _Bail()
        return lambda: values[idx]
    if isinstance(struct, Seq):
        slots = ctx.instance_slots.get(struct)
        if not slots:
            raise _Bail()
        if len(slots) > 1:
            family = None
            if isinstance(target, Var) and target.name in env:
                family = env[target.name][1]
            elif hasattr(target, "family"):
                family = target.family
            slots = [s for s in slots if s[0] == family]
            if len(slots) != 1:
                raise _Bail()
        slot = slots[0]
        inst_vals = ctx.inst_vals
        return lambda: inst_vals[slot]
    raise _Bail()


def _compile_compare(ctx: _Ctx, expr: Compare, env: dict) -> Callable:
    a = _compile(ctx, expr.left, env)
    b = _compile(ctx, expr.right, env)
    op = expr.op
    if op in ("<", "<="):
        def ordered():
            x = a()
            y = b()
            if x is UNKNOWN or y is UNKNOWN:
                return UNKNOWN
            if not is_int(x) or not is_int(y):
                raise EvalTypeError(f"ordering on non-integers: {x!r} {op} {y!r}")
            return x < y if op == "<" else x <= y
        return ordered

    def equal():
        x = a()
        y = b()
        if x is UNKNOWN or y is UNKNOWN:
            return UNKNOWN
        eq = _values_equal(x, y)
        return eq if op == "==" else not eq

    return equal


def _compile_edge_sum(ctx: _Ctx, expr: Builtin, env: dict) -> Callable:
    target = _resolve_struct(ctx, expr.args[0], env)
    if not isinstance(target, Element):
        raise _Bail()
    i, j = target.i, target.j
    if expr.name == "cross":
        if target.kind is not Kind.P:
            raise _Bail()
        probes = (hp(i, j - 1), hp(i, j), vp(i - 1, j), vp(i, j))
    else:
        if target.kind is not Kind.C:
            raise _Bail()
        probes = (hp(i, j), hp(i + 1, j), vp(i, j), vp(i, j + 1))
    idxs = [
        ctx.model.elem_index[e] for e in probes if e in ctx.model.es
    ]
    values = ctx.values

    def edge_sum():
        total = 0
        for idx in idxs:
            v = values[idx]
            if v is UNKNOWN:
                return UNKNOWN
            if not is_int(v):
                raise EvalTypeError(f"edge carries non-integer value {v!r}")
            total += v
        return total

    return edge_sum


def _compile_coll(ctx: _Ctx, expr: Expr, env: dict) -> list:
    """A collection as a list of membership closures (True/False/UNKNOWN),
    paired positionally with ``_coll_members``; only fixed collections with
    value-dependent filters are supported."""
    members, preds = _coll_members(ctx, expr, env)
    return preds


def _coll_members(ctx: _Ctx, expr: Expr, env: dict):
    if isinstance(expr, FilterExpr):
        members, preds = _coll_members(ctx, expr.coll, env)
        out_preds = []
        for member, base_pred in zip(members, preds):
            inner = dict(env)
            inner[expr.var] = (member, _member_family(ctx, expr.coll, env, member))
            pfn = _compile(ctx, expr.predicate, inner)
            if base_pred is None:
                out_preds.append(pfn)
            else:
                bp = base_pred
                out_preds.append(lambda bp=bp, pfn=pfn: _and3(bp(), pfn()))
        return members, out_preds
    # otherwise the collection itself must be variable-free
    if ctx.scope_of(expr, env):
        raise _Bail()
    coll = ctx.fold(expr, env)
    if not isinstance(coll, Coll) or coll.maybe:
        raise _Bail()
    return list(coll.items), [None] * len(coll.items)


def _member_family(ctx: _Ctx, coll_expr: Expr, env: dict, member):
    try:
        coll = ctx.fold(coll_expr, env) if not ctx.scope_of(coll_expr, env) else None
    except EvalError:
        coll = None
    if isinstance(coll, Coll) and coll.family is not None:
        return coll.family
    if isinstance(member, Element):
        return ctx.board.elements.group_of(member)
    return None


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is UNKNOWN or b is UNKNOWN:
        return UNKNOWN
    return True


def _compile_all_different(ctx: _Ctx, arg: Expr, env: dict) -> Callable:
    if isinstance(arg, (FilterExpr,)):
        members, preds = _coll_members(ctx, arg, env)
    elif isinstance(arg, MembersOf) or isinstance(arg, Var):
        struct = _resolve_struct(ctx, arg.expr if isinstance(arg, MembersOf) else arg, env)
        if not isinstance(struct, Seq):
            raise _Bail()
        members, preds = list(struct.members), [None] * len(struct.members)
    else:
        if ctx.scope_of(arg, env):
            raise _Bail()
        folded = ctx.fold(arg, env)
        if isinstance(folded, Seq):
            members, preds = list(folded.members), [None] * len(folded.members)
        elif isinstance(folded, Coll) and not folded.maybe:
            members, preds = list(folded.items), [None] * len(folded.items)
        else:
            raise _Bail()
    readers = []
    for member in members:
        if not isinstance(member, Element):
            raise _Bail()
        idx = ctx.model.elem_index.get(member)
        if idx is None:
            raise _Bail()
        readers.append(idx)
    values = ctx.values
    pairs = list(zip(readers, preds))

    def distinct():
        seen = []
        unknown = False
        for idx, pred in pairs:
            if pred is not None:
                keep = pred()
                if keep is False:
                    continue
                if keep is UNKNOWN:
                    unknown = True
                    continue
            v = values[idx]
            if v is UNKNOWN:
                unknown = True
                continue
            if v in seen:
                return False
            seen.append(v)
        return UNKNOWN if unknown else True

    return distinct


def _compile_aggregate(ctx: _Ctx, expr, env: dict) -> Callable:
    members, preds = _coll_members(ctx, expr.coll, env)
    bodies = []
    for member, pred in zip(members, preds):
        inner = dict(env)
        inner[expr.var] = (member, _member_family(ctx, expr.coll, env, member))
        bodies.append((pred, _compile(ctx, expr.body, inner)))
    is_sum = isinstance(expr, SumExpr)

    def agg():
        total = 0 if is_sum else 1
        for pred, body in bodies:
            if pred is not None:
                keep = pred()
                if keep is False:
                    continue
                if keep is UNKNOWN:
                    return UNKNOWN
            v = body()
            if v is UNKNOWN:
                return UNKNOWN
            if not is_int(v):
                raise EvalTypeError(f"aggregation over non-integer {v!r}")
            total = total + v if is_sum else total * v
        return total

    return agg


def _compile_quantifier(ctx: _Ctx, expr, env: dict) -> Callable:
    members, preds = _coll_members(ctx, expr.coll, env)
    bodies = []
    for member, pred in zip(members, preds):
        inner = dict(env)
        inner[expr.var] = (member, _member_family(ctx, expr.coll, env, member))
        bodies.append((pred, _compile(ctx, expr.body, inner)))
    universal = isinstance(expr, ForAll)

    def quant():
        unknown = False
        for pred, body in bodies:
            keep = True
            if pred is not None:
                keep = pred()
                if keep is False:
                    continue
                if keep is UNKNOWN:
                    unknown = True
            v = body()
            if universal:
                if v is False and keep is True:
                    return False
                if v is UNKNOWN or keep is UNKNOWN:
                    unknown = True
            else:
                if v is True and keep is True:
                    return True
                if v is UNKNOWN or keep is UNKNOWN:
                    unknown = True
        if unknown:
            return UNKNOWN
        return True if universal else False

    return quant
