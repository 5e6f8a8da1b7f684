import itertools
import json

import pytest

from pzlkit.board import Assignment, Board, CompletedBoard
from pzlkit.boardio import (
    completed_from_doc,
    completed_to_doc,
    dump_doc,
    problem_from_doc,
    problem_to_doc,
)
from pzlkit.corpus import load_rule
from pzlkit.grid import GridDims, build_elements, hp, vp
from pzlkit.render import render
from pzlkit.solver import SearchConfig, enumerate_completed
from pzlkit.structure import Seq
from pzlkit.values import MARK, NULL, UNDECIDED

SLITHERLINK = load_rule("slitherlink")


def worked_loop():
    es = build_elements(GridDims(2, 2))
    loop = (hp(1, 1), hp(2, 1), vp(1, 1), vp(1, 2))
    board = Board(GridDims(2, 2), es, {"Gp": (Seq(loop),)})
    values = {e: NULL for e in es.P + es.Ec}
    for e in es.Ep:
        values[e] = 1 if e in loop else 0
    for e, v in zip(es.C, (4, 1, 1, 0)):
        values[e] = v
    return CompletedBoard(board, Assignment(values, {("Gp", 0): NULL}))


def test_render_worked_loop():
    cb = worked_loop()
    text = render(cb.board, cb.assignment)
    assert text.count("-") == 2 and text.count("|") == 2  # 4 drawn edge glyphs
    assert text == ("+-+ +\n"
                    "|4|1 \n"
                    "+-+ +\n"
                    " 1 0 \n"
                    "+ + +\n")


def test_render_empty_assignment():
    es = build_elements(GridDims(2, 2))
    board = Board(GridDims(2, 2), es, {})
    blank = Assignment({e: UNDECIDED for e in es.all_elements()})
    text = render(board, blank)
    assert text.count(".") == 4
    assert "-" not in text and "|" not in text


def test_render_mark_glyph():
    es = build_elements(GridDims(1, 1))
    board = Board(GridDims(1, 1), es, {})
    values = {e: 0 for e in es.Ep}
    values.update({e: NULL for e in es.P})
    values[es.C[0]] = MARK
    text = render(board, Assignment(values))
    assert "#" in text


def test_render_injective_on_cell_assignments():
    es = build_elements(GridDims(1, 2))
    board = Board(GridDims(1, 2), es, {})
    seen = {}
    for combo in itertools.product((NULL, 1, 2, MARK), repeat=2):
        values = {e: 0 for e in es.Ep}
        values.update({e: NULL for e in es.P + es.Ec})
        for e, v in zip(es.C, combo):
            values[e] = v
        text = render(board, Assignment(values))
        # null renders like undecided by design; all other pairs distinct
        assert text not in seen or combo == seen[text]
        seen[text] = combo


def test_completed_round_trip():
    cb = next(iter(enumerate_completed(SLITHERLINK, SearchConfig(dims=GridDims(2, 2), limit=1))))
    doc = completed_to_doc(SLITHERLINK, cb)
    text = dump_doc(doc)
    again = completed_from_doc(json.loads(text), SLITHERLINK)
    assert again == cb
    assert dump_doc(completed_to_doc(SLITHERLINK, again)) == text


def test_doc_key_order_canonical():
    cb = worked_loop()
    doc = completed_to_doc(SLITHERLINK, cb)
    keys = list(doc["assignment"].keys())
    es = cb.board.elements
    expected = [e.ident for e in es.all_elements()] + ["Gp[0]"]
    assert keys == expected


def test_problem_round_trip():
    cb = worked_loop()
    from pzlkit.problems import mask

    problem = mask(SLITHERLINK, cb, seed=1)
    doc = problem_to_doc(SLITHERLINK, problem.board, problem.presented, problem.certificate)
    text = dump_doc(doc)
    board, presented, cert = problem_from_doc(json.loads(text), SLITHERLINK)
    assert board == problem.board
    assert presented == problem.presented
    assert cert == problem.certificate
    assert "undecided" in text


def test_doc_value_encoding():
    cb = worked_loop()
    doc = completed_to_doc(SLITHERLINK, cb)
    assert doc["assignment"]["p(1,1)"] is None  # null
    assert doc["assignment"]["hp(1,1)"] == 1
    assert doc["families"]["Gp"][0][0] == "hp(1,1)"


def test_missing_member_rejected():
    cb = worked_loop()
    doc = completed_to_doc(SLITHERLINK, cb)
    del doc["assignment"]["c(1,1)"]
    with pytest.raises(ValueError):
        completed_from_doc(doc, SLITHERLINK)
