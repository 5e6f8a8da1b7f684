from .ast import (
    Rule,
    StructDef,
    ValueItem,
    RangeItem,
    RequirementError,
    resolve_valueset,
)
from .check import Diagnostic, static_check
from .parser import RuleParseError, parse_rule
from .serializer import serialize_rule

__all__ = [
    "Rule",
    "StructDef",
    "ValueItem",
    "RangeItem",
    "RequirementError",
    "resolve_valueset",
    "Diagnostic",
    "static_check",
    "RuleParseError",
    "parse_rule",
    "serialize_rule",
]
