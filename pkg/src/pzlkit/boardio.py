"""File formats for completed boards and problems.

Both are single JSON documents (schema in docs/formats.md).  A completed
board carries ``rule``, ``m``, ``n``, ``families`` (family name -> list of
instances, each a list of element ids in canonical order) and
``assignment`` (member key -> encoded value).  A problem replaces
``assignment`` with ``presented`` and adds a ``certificate``.  Member keys
are element ids (``c(1,2)``) or instance slots (``Gp[0]``); keys appear in
board member order, and serialization is byte-deterministic.
"""

from __future__ import annotations

import json
import re

from .board import Assignment, Board, CompletedBoard
from .dsl import Rule
from .grid import GridDims, build_elements, parse_element_id
from .structure import Seq, canonicalize
from .values import value_from_json, value_to_json

_SLOT_RE = re.compile(r"^(\w+)\[(\d+)\]$")


def _member_items(board: Board, asg: Assignment):
    for e in board.elements.all_elements():
        yield e.ident, value_to_json(asg.value_of_element(e))
    for family, instances in board.selected.items():
        for idx in range(len(instances)):
            yield f"{family}[{idx}]", value_to_json(asg.instance_value(family, idx))


def _board_doc(rule_name: str, board: Board) -> dict:
    return {
        "rule": rule_name,
        "m": board.dims.m,
        "n": board.dims.n,
        "families": {
            family: [[e.ident for e in inst.members] for inst in instances]
            for family, instances in board.selected.items()
        },
    }


def completed_to_doc(rule: Rule, cb: CompletedBoard) -> dict:
    doc = _board_doc(rule.name, cb.board)
    doc["assignment"] = dict(_member_items(cb.board, cb.assignment))
    return doc


def problem_to_doc(rule: Rule, board: Board, presented: Assignment, certificate: dict) -> dict:
    doc = _board_doc(rule.name, board)
    doc["presented"] = dict(_member_items(board, presented))
    doc["certificate"] = dict(certificate)
    return doc


def dump_doc(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _board_from_doc(doc: dict, rule: Rule) -> Board:
    dims = GridDims(int(doc["m"]), int(doc["n"]))
    es = build_elements(dims)
    selected = {}
    families = doc.get("families", {})
    for family in rule.combined_names():
        instances = []
        for raw in families.get(family, []):
            instances.append(canonicalize(parse_element_id(t) for t in raw))
        selected[family] = tuple(instances)
    return Board(dims, es, selected)


def _values_from_doc(board: Board, table: dict) -> Assignment:
    element_values = {}
    instance_values = {}
    for key, raw in table.items():
        value = value_from_json(raw)
        m = _SLOT_RE.match(key)
        if m:
            instance_values[(m.group(1), int(m.group(2)))] = value
        else:
            element_values[parse_element_id(key)] = value
    for e in board.elements.all_elements():
        if e not in element_values:
            raise ValueError(f"missing value for {e.ident}")
    for family, instances in board.selected.items():
        for idx in range(len(instances)):
            if (family, idx) not in instance_values:
                raise ValueError(f"missing value for {family}[{idx}]")
    return Assignment(element_values, instance_values)


def completed_from_doc(doc: dict, rule: Rule) -> CompletedBoard:
    board = _board_from_doc(doc, rule)
    return CompletedBoard(board, _values_from_doc(board, doc["assignment"]))


def problem_from_doc(doc: dict, rule: Rule):
    board = _board_from_doc(doc, rule)
    presented = _values_from_doc(board, doc["presented"])
    return board, presented, dict(doc.get("certificate", {}))
