import itertools

import pytest

from pzlkit.grid import GridDims, build_elements, p, c, hp, vp, hc, vc
from pzlkit.relations import ALL_RELATIONS, RelationKind, relate
from pzlkit.structure import Seq

H, V, D, M = RelationKind.H, RelationKind.V, RelationKind.D, RelationKind.M


def test_h_on_adjacent_points():
    assert relate(H, p(1, 1), p(1, 2))
    assert not relate(H, p(1, 1), p(2, 1))


def test_d_point_edge_pairs():
    assert relate(D, hp(1, 1), vp(1, 1))
    assert relate(D, hp(1, 1), vp(1, 2))  # shares the right endpoint
    assert not relate(D, hp(1, 1), vp(2, 1))


def test_h_has_no_point_cell_case():
    assert not relate(H, p(1, 1), c(1, 1))


def test_m_lift_shared_member():
    assert relate(M, Seq((c(1, 1), c(2, 2))), Seq((c(2, 2),)))
    assert not relate(M, Seq((c(1, 1),)), Seq((c(2, 2),)))


def test_v_point_vs_vertical_edge():
    assert relate(V, p(1, 1), vp(1, 1))
    assert relate(V, p(2, 1), vp(1, 1))
    assert not relate(V, p(3, 1), vp(1, 1))


def test_h_cell_vs_cell_edge():
    assert relate(H, c(1, 1), hc(1, 1))
    assert relate(H, c(1, 2), hc(1, 1))
    assert relate(H, hc(1, 1), c(1, 1))
    assert not relate(V, c(1, 1), hc(1, 1))


def test_d_cell_edges():
    assert relate(D, hc(1, 1), vc(1, 1))
    assert relate(D, vc(1, 1), hc(1, 1))


def test_structure_lift_uses_any_member_pair():
    a = Seq((c(1, 1), c(2, 2)))
    b = Seq((c(2, 3),))
    assert relate(H, a, b)  # c(2,2) ~ c(2,3)
    assert not relate(H, Seq((c(1, 1),)), b)


@pytest.mark.parametrize("kind", sorted(ALL_RELATIONS, key=lambda r: r.value))
@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 3)])
def test_relations_symmetric_on_all_pairs(kind, m, n):
    elems = build_elements(GridDims(m, n)).all_elements()
    for x, y in itertools.combinations(elems, 2):
        assert relate(kind, x, y) == relate(kind, y, x), (kind, x, y)


@pytest.mark.parametrize("m,n", [(2, 2), (3, 3)])
def test_m_reflexive_others_irreflexive(m, n):
    for e in build_elements(GridDims(m, n)).all_elements():
        assert relate(M, e, e)
        assert not relate(H, e, e)
        assert not relate(V, e, e)
        assert not relate(D, e, e)
