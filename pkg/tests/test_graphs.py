"""Structure-engine checks, anchored by a brute-force enumeration oracle.

The oracle enumerates every subset of the base with itertools, computes the
induced edge set pairwise, and checks connectivity with a throwaway
union-find.  It never touches the kernel path under test.
"""

import itertools

import pytest

from pzlkit.errors import BudgetExceededError
from pzlkit.graphs import (
    FamilySpec,
    base_spec,
    combine,
    family_instances,
    instances_of,
    is_connected,
    is_subgraph,
    relation_graph,
)
from pzlkit.grid import GridDims, build_elements, c, hp, vp
from pzlkit.relations import RelationKind, relate
from pzlkit.structure import Seq, sort_key

H, V, D, M = RelationKind.H, RelationKind.V, RelationKind.D, RelationKind.M


def brute_force_connected_subsets(base, rels):
    """Independent enumeration: all nonempty connected induced subsets."""
    out = []
    n = len(base)
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            parent = {i: i for i in combo}

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for u, v in itertools.combinations(combo, 2):
                if any(relate(k, base[u], base[v]) for k in rels):
                    parent[find(u)] = find(v)
            if len({find(i) for i in combo}) == 1:
                out.append(Seq(base[i] for i in combo))
    out.sort(key=sort_key)
    return tuple(out)


def test_relation_graph_1x1_edges_is_complete_bipartite():
    es = build_elements(GridDims(1, 1))
    g = relation_graph(es.Ep, {H, V, D})
    # two horizontal and two vertical edges; every hp pairs with every vp
    assert len(g.vertices) == 4
    assert len(g.edges) == 4
    verts = g.vertices
    for u, v in g.edges:
        assert {verts[u].kind, verts[v].kind} == {hp(1, 1).kind, vp(1, 1).kind}


def test_relation_graph_m_only_has_no_edges():
    es = build_elements(GridDims(2, 2))
    assert relation_graph(es.C, {M}).edges == ()


def test_relation_graph_two_cells_one_edge():
    g = relation_graph((c(1, 1), c(1, 2)), {H})
    assert g.edges == ((0, 1),)


def test_relation_graph_rejects_empty_relation_set():
    with pytest.raises(ValueError):
        relation_graph((c(1, 1),), set())


def test_is_connected_basics():
    single = relation_graph((c(1, 1),), {H})
    assert is_connected(single)
    isolated = relation_graph((c(1, 1), c(1, 3)), {H})
    assert not is_connected(isolated)
    path = relation_graph((c(1, 1), c(1, 2), c(1, 3)), {H})
    assert is_connected(path)
    empty = relation_graph((), {H})
    assert is_connected(empty)


def test_is_subgraph():
    g = relation_graph((c(1, 1), c(1, 2), c(2, 1)), {H, V})
    assert is_subgraph(g, g)
    induced = relation_graph((c(1, 1), c(1, 2)), {H, V})
    assert is_subgraph(induced, g)
    foreign = relation_graph((c(3, 3),), {H, V})
    assert not is_subgraph(foreign, g)


def test_combine_1x1_point_edges_has_13_members():
    es = build_elements(GridDims(1, 1))
    got = combine({H, V, D}, es.Ep)
    assert len(got) == 13
    sizes = sorted(len(s.members) for s in got)
    assert sizes == [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 4]


def test_combine_1x2_cells_under_hv():
    es = build_elements(GridDims(1, 2))
    got = combine({H, V}, es.C)
    assert got == (
        Seq((c(1, 1),)),
        Seq((c(1, 1), c(1, 2))),
        Seq((c(1, 2),)),
    )


def test_combine_budget_error_names_count():
    es = build_elements(GridDims(2, 2))
    with pytest.raises(BudgetExceededError) as exc:
        combine({H, V, D}, es.Ep, budget=10)
    assert exc.value.count == 10


ALL_SUBSETS = [
    frozenset(s)
    for r in range(1, 5)
    for s in itertools.combinations((H, V, D, M), r)
]
SMALL_GRIDS = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)]  # <= 9 points


@pytest.mark.parametrize("m,n", SMALL_GRIDS)
@pytest.mark.parametrize("rels", ALL_SUBSETS, ids=lambda s: "".join(sorted(r.value for r in s)))
def test_combine_matches_brute_force(m, n, rels):
    es = build_elements(GridDims(m, n))
    for group in ("P", "C", "Ep", "Ec"):
        base = es.sequence(group)
        assert combine(rels, base) == brute_force_connected_subsets(base, rels)


def test_combine_singletons_always_present():
    es = build_elements(GridDims(2, 2))
    got = set(combine({H}, es.C))
    for cell in es.C:
        assert Seq((cell,)) in got


def test_combine_members_are_connected():
    from pzlkit.graphs import relation_graph as rg

    es = build_elements(GridDims(2, 2))
    for s in combine({H, V}, es.C):
        assert is_connected(rg(s.members, {H, V}))


def test_instances_of_base_family():
    got = list(instances_of(base_spec("C"), GridDims(2, 2)))
    assert got == list(build_elements(GridDims(2, 2)).C)


def test_instances_of_first_combined_is_least_singleton():
    spec = FamilySpec("A", frozenset({H, V}), base_spec("C"))
    first = next(instances_of(spec, GridDims(3, 3)))
    assert first == Seq((c(1, 1),))


def test_instances_of_matches_combine():
    spec = FamilySpec("Gp", frozenset({H, V, D}), base_spec("Ep"))
    got = family_instances(spec, GridDims(1, 1))
    assert len(got) == 13
    es = build_elements(GridDims(1, 1))
    assert got == combine({H, V, D}, es.Ep)


def test_instances_of_budget_error_mid_stream():
    spec = FamilySpec("Gp", frozenset({H, V, D}), base_spec("Ep"))
    stream = instances_of(spec, GridDims(2, 2), budget=5)
    seen = []
    with pytest.raises(BudgetExceededError):
        for s in stream:
            seen.append(s)
    assert len(seen) == 5
