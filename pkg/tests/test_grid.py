import pytest

from pzlkit.grid import (
    Element,
    GridDims,
    Kind,
    build_elements,
    in_bounds,
    parse_element_id,
    p,
    c,
    hp,
    vp,
    hc,
    vc,
)


def test_2x2_counts_match_worked_listing():
    es = build_elements(GridDims(2, 2))
    assert len(es.P) == 9
    assert len(es.Hp) == 6
    assert len(es.Vp) == 6
    assert len(es.C) == 4
    assert len(es.Hc) == 2
    assert len(es.Vc) == 2
    assert es.P[0] == p(1, 1)
    assert es.P[-1] == p(3, 3)
    assert es.Vc == (vc(1, 1), vc(1, 2))


def test_1x1_counts():
    es = build_elements(GridDims(1, 1))
    assert len(es.P) == 4
    assert len(es.Ep) == 4
    assert len(es.C) == 1
    assert len(es.Ec) == 0


def test_1x2_edge_counts():
    es = build_elements(GridDims(1, 2))
    assert len(es.Hc) == 1  # m*(n-1)
    assert len(es.Vc) == 0  # (m-1)*n


@pytest.mark.parametrize("m,n", [(0, 1), (1, 0), (-2, 3)])
def test_rejects_bad_dims(m, n):
    with pytest.raises(ValueError):
        build_elements(GridDims(m, n))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (4, 2)])
def test_count_formulas(m, n):
    es = build_elements(GridDims(m, n))
    assert len(es.P) == (m + 1) * (n + 1)
    assert len(es.C) == m * n
    assert len(es.Hp) == (m + 1) * n
    assert len(es.Vp) == m * (n + 1)
    assert len(es.Hc) == m * (n - 1)
    assert len(es.Vc) == (m - 1) * n


def test_sequences_sorted_ascending():
    es = build_elements(GridDims(3, 2))
    for name in ("P", "C", "Hp", "Vp", "Hc", "Vc"):
        seq = es.sequence(name)
        assert list(seq) == sorted(seq)


def test_out_of_range_representable_but_not_contained():
    dims = GridDims(2, 2)
    es = build_elements(dims)
    ghost = hp(1, 0)  # probed by cross at a left-border point
    assert not in_bounds(ghost, dims)
    assert ghost not in es
    assert hp(1, 1) in es


def test_element_ids_round_trip():
    for e in build_elements(GridDims(2, 3)).all_elements():
        assert parse_element_id(e.ident) == e
    assert parse_element_id("vc(1,2)") == vc(1, 2)
    with pytest.raises(ValueError):
        parse_element_id("q(1,2)")
    with pytest.raises(ValueError):
        parse_element_id("c(1, 2)")  # no spaces allowed


def test_cross_kind_order_chain():
    assert Kind.P < Kind.C < Kind.HP < Kind.VP < Kind.HC < Kind.VC
    assert p(9, 9) < c(1, 1)
    assert c(9, 9) < hp(1, 1)


def test_group_mapping():
    es = build_elements(GridDims(2, 2))
    assert es.group_of(hp(1, 1)) == "Ep"
    assert es.group_of(vp(1, 1)) == "Ep"
    assert es.group_of(hc(1, 1)) == "Ec"
    assert es.group_of(c(1, 1)) == "C"
    assert es.group_of(p(1, 1)) == "P"
