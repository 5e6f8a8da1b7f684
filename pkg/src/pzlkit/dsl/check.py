"""Static diagnostics over a parsed rule.

These are advisory data, not exceptions: unmaskable families (a hidden set
that can express neither the family's values nor undecided), size
requirements nothing satisfies, and shape predicates applied to structures
they are not defined for (is_rectangle/is_square take instances of a
family built by exactly one combine).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..grid import GridDims
from ..values import UNDECIDED
from .ast import (
    BoardOf,
    Builtin,
    Exists,
    FilterExpr,
    ForAll,
    ProdExpr,
    RangeItem,
    RegionContaining,
    RequirementError,
    Rule,
    SumExpr,
    ValueItem,
    Var,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}[{self.code}]: {self.message}"


def _hidden_covers_domain(rule: Rule, family: str) -> bool:
    hidden = rule.hidden_set(family)
    if any(isinstance(i, ValueItem) and i.value is UNDECIDED for i in hidden):
        return True
    # without undecided, every domain entry must be presentable as itself
    domain = rule.domain_set(family)
    hidden_items = set(hidden)
    return all(item in hidden_items for item in domain)


def _combined_once(rule: Rule, family: str) -> bool:
    if not rule.is_combined(family):
        return False
    sd = next(s for s in rule.structures if s.name == family)
    return not rule.is_combined(sd.base)


def _shape_arg_diagnostics(rule: Rule) -> list[Diagnostic]:
    out = []

    def walk(expr, fam_env: dict):
        if isinstance(expr, (ForAll, Exists, SumExpr, ProdExpr)):
            inner = dict(fam_env)
            inner[expr.var] = _family_of(expr.coll, fam_env)
            walk(expr.coll, fam_env)
            walk(expr.body, inner)
            return
        if isinstance(expr, FilterExpr):
            inner = dict(fam_env)
            inner[expr.var] = _family_of(expr.coll, fam_env)
            walk(expr.coll, fam_env)
            walk(expr.predicate, inner)
            return
        if isinstance(expr, Builtin) and expr.name in ("is_rectangle", "is_square"):
            arg = expr.args[0]
            fam = None
            if isinstance(arg, Var):
                fam = fam_env.get(arg.name)
            elif isinstance(arg, RegionContaining):
                fam = arg.family
            if fam is not None and not _combined_once(rule, fam):
                out.append(
                    Diagnostic(
                        "error",
                        "shape-arg",
                        f"{expr.name} applies to instances of a once-combined "
                        f"family; got a member of {fam!r}",
                    )
                )
        for f in getattr(expr, "__dataclass_fields__", ()):
            v = getattr(expr, f)
            if hasattr(v, "__dataclass_fields__"):
                walk(v, fam_env)
            elif isinstance(v, tuple):
                for item in v:
                    if hasattr(item, "__dataclass_fields__"):
                        walk(item, fam_env)

    def _family_of(coll, fam_env):
        if isinstance(coll, BoardOf):
            return coll.family
        if isinstance(coll, FilterExpr):
            return _family_of(coll.coll, fam_env)
        return None

    for cexpr in rule.constraints:
        walk(cexpr, {})
    return out


def static_check(rule: Rule, probe_limit: int = 12) -> list[Diagnostic]:
    """Collect diagnostics; an empty list means a clean rule."""
    out: list[Diagnostic] = []

    for family in rule.value_families():
        if family not in rule.domains and family not in rule.hidden:
            continue
        if not _hidden_covers_domain(rule, family):
            out.append(
                Diagnostic(
                    "warning",
                    "unmaskable-family",
                    f"hidden set of {family!r} contains neither every domain "
                    "value nor undecided; boards of this family cannot be "
                    "presented",
                )
            )

    satisfiable = False
    for m in range(1, probe_limit + 1):
        for n in range(1, probe_limit + 1):
            try:
                rule.size_env(GridDims(m, n))
                satisfiable = True
                break
            except RequirementError:
                continue
        if satisfiable:
            break
    if not satisfiable:
        out.append(
            Diagnostic(
                "warning",
                "size-unsatisfiable",
                f"no grid up to {probe_limit}x{probe_limit} meets the size requirements",
            )
        )

    # ranges must resolve somewhere; try the first satisfiable size
    if satisfiable:
        env = None
        for m in range(1, probe_limit + 1):
            for n in range(1, probe_limit + 1):
                try:
                    env = rule.size_env(GridDims(m, n))
                    break
                except RequirementError:
                    continue
            if env:
                break
        for family in rule.value_families():
            for label, table in (("domain", rule.domains), ("hidden", rule.hidden)):
                if family in table:
                    try:
                        from .ast import resolve_valueset

                        resolve_valueset(table[family], env)
                    except RequirementError as exc:
                        out.append(
                            Diagnostic("error", "bad-value-set", f"{label} of {family!r}: {exc}")
                        )

    out.extend(_shape_arg_diagnostics(rule))
    return out
