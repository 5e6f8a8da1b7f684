"""Solution values: integers plus the null / mark / undecided constants.

A value is either a plain ``int`` or one of three singletons: ``NULL``
(structure has no state), ``MARK`` (the distinguished non-numeric symbol,
written ``x`` in rule files), and ``UNDECIDED`` (a presented-but-unknown
entry in a problem).  Only equality is defined across kinds; arithmetic and
ordering are reserved for integers.
"""

from __future__ import annotations

from typing import Union


class _Const:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


NULL = _Const("null")
MARK = _Const("x")
UNDECIDED = _Const("undecided")

Value = Union[int, _Const]


def is_int(v: Value) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def value_sort_key(v: Value) -> tuple:
    """Canonical ascending order: null < integers < x < undecided."""
    if v is NULL:
        return (0, 0)
    if is_int(v):
        return (1, v)
    if v is MARK:
        return (2, 0)
    if v is UNDECIDED:
        return (3, 0)
    raise TypeError(f"not a value: {v!r}")


def value_to_json(v: Value):
    """Encode for the board/problem file formats."""
    if v is NULL:
        return None
    if v is MARK:
        return "x"
    if v is UNDECIDED:
        return "undecided"
    if is_int(v):
        return v
    raise TypeError(f"not a value: {v!r}")


def value_from_json(raw) -> Value:
    if raw is None:
        return NULL
    if raw == "x":
        return MARK
    if raw == "undecided":
        return UNDECIDED
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    raise ValueError(f"not an encoded value: {raw!r}")


def value_to_text(v: Value) -> str:
    """Encode for rule files (the same spelling the parser accepts)."""
    if is_int(v):
        return str(v)
    return repr(v)
