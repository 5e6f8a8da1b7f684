"""Canonical text form of a Rule.

Serialization is deterministic, parses back to a structurally equal Rule,
and normalizes value sets (explicit values ascending; symbolic ranges kept
as written).  Operator precedence drives minimal parenthesisation.
"""

from __future__ import annotations

from ..relations import RelationKind
from ..values import value_to_text
from .ast import (
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
    RangeItem,
    RegionContaining,
    Rule,
    SizeOf,
    SolutionOf,
    SumExpr,
    ValueItem,
    Var,
)

_REL_ORDER = ("H", "V", "D", "M")

# binding strength; higher binds tighter
_QUANT, _IFF, _IMPLIES, _OR, _AND, _NOT, _CMP, _ADD, _MUL, _POW, _ATOM = range(11)

_ARITH_LEVEL = {"+": _ADD, "-": _ADD, "*": _MUL, "^": _POW}


def _relset(rels: frozenset) -> str:
    names = sorted((r.value for r in rels), key=_REL_ORDER.index)
    return "{" + ",".join(names) + "}"


def emit_expr(expr: Expr) -> str:
    return _emit(expr, 0)


def _emit(expr: Expr, min_level: int) -> str:
    text, level = _render(expr)
    if level < min_level:
        return f"({text})"
    return text


def _render(expr: Expr) -> tuple[str, int]:
    if isinstance(expr, (ForAll, Exists)):
        kw = "forall" if isinstance(expr, ForAll) else "exists"
        coll = _emit(expr.coll, _ATOM)
        return f"{kw} {expr.var} in {coll}: {_emit(expr.body, _QUANT)}", _QUANT
    if isinstance(expr, Iff):
        return f"{_emit(expr.left, _IFF)} iff {_emit(expr.right, _IFF + 1)}", _IFF
    if isinstance(expr, Implies):
        return f"{_emit(expr.left, _IMPLIES + 1)} implies {_emit(expr.right, _IMPLIES)}", _IMPLIES
    if isinstance(expr, Or):
        return f"{_emit(expr.left, _OR)} or {_emit(expr.right, _OR + 1)}", _OR
    if isinstance(expr, And):
        return f"{_emit(expr.left, _AND)} and {_emit(expr.right, _AND + 1)}", _AND
    if isinstance(expr, Not):
        return f"not {_emit(expr.expr, _NOT)}", _NOT
    if isinstance(expr, Compare):
        return f"{_emit(expr.left, _CMP + 1)} {expr.op} {_emit(expr.right, _CMP + 1)}", _CMP
    if isinstance(expr, Arith):
        lvl = _ARITH_LEVEL[expr.op]
        if expr.op == "^":
            return f"{_emit(expr.left, lvl + 1)} ^ {_emit(expr.right, lvl)}", lvl
        return f"{_emit(expr.left, lvl)} {expr.op} {_emit(expr.right, lvl + 1)}", lvl
    if isinstance(expr, Literal):
        return value_to_text(expr.value), _ATOM
    if isinstance(expr, Var):
        return expr.name, _ATOM
    if isinstance(expr, BoardOf):
        return f"B({expr.family})", _ATOM
    if isinstance(expr, MembersOf):
        return f"members({_emit(expr.expr, 0)})", _ATOM
    if isinstance(expr, CountExpr):
        return f"count({_emit(expr.coll, 0)})", _ATOM
    if isinstance(expr, SizeOf):
        return f"size({_emit(expr.expr, 0)})", _ATOM
    if isinstance(expr, SolutionOf):
        return f"solution({_emit(expr.expr, 0)})", _ATOM
    if isinstance(expr, ConnectTo):
        return f"connect({_emit(expr.expr, 0)}, {_relset(expr.relations)})", _ATOM
    if isinstance(expr, RegionContaining):
        return f"region({expr.family}, {_emit(expr.expr, 0)})", _ATOM
    if isinstance(expr, FilterExpr):
        return f"filter({_emit(expr.coll, 0)}, {expr.var}: {_emit(expr.predicate, 0)})", _ATOM
    if isinstance(expr, SumExpr):
        return f"sum({expr.var} in {_emit(expr.coll, 0)}: {_emit(expr.body, 0)})", _ATOM
    if isinstance(expr, ProdExpr):
        return f"prod({expr.var} in {_emit(expr.coll, 0)}: {_emit(expr.body, 0)})", _ATOM
    if isinstance(expr, Builtin):
        if expr.name in ("no_overlap", "fill"):
            return f"{expr.name}({', '.join(expr.args)})", _ATOM
        args = ", ".join(_emit(a, 0) for a in expr.args)
        return f"{expr.name}({args})", _ATOM
    raise AssertionError(f"unhandled node {type(expr).__name__}")


def _emit_valueset(vs: tuple) -> str:
    parts = []
    for item in vs:
        if isinstance(item, ValueItem):
            parts.append(value_to_text(item.value))
            continue
        lo, hi = _emit(item.lo, _ADD), _emit(item.hi, _ADD)
        # a symbolic single value parses back as RangeItem(e, e); literal
        # pairs must stay spelled as a range to round-trip
        if item.lo == item.hi and not isinstance(item.lo, Literal):
            parts.append(lo)
        else:
            parts.append(f"{lo}..{hi}")
    return "{" + ", ".join(parts) + "}"


def serialize_rule(rule: Rule) -> str:
    """Deterministic canonical text; parse(serialize(r)) == r."""
    lines = [f'puzzle "{rule.name}"']
    for r in rule.requires:
        lines.append(f"require {emit_expr(r)}")
    if rule.structures:
        lines.append("")
    for sd in rule.structures:
        lines.append(f"structure {sd.name} = combine {_relset(sd.relations)} on {sd.base}")
    for label, table in (("domain", rule.domains), ("hidden", rule.hidden)):
        named = [f for f in rule.value_families() if f in table]
        if named:
            lines.append("")
        for fam in named:
            lines.append(f"{label} {fam} = {_emit_valueset(table[fam])}")
    if rule.constraints:
        lines.append("")
    for cexpr in rule.constraints:
        lines.append(f"constraint {emit_expr(cexpr)}")
    return "\n".join(lines) + "\n"
