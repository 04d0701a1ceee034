import math
from itertools import combinations

import pytest

from graphprod import (
    INF,
    DefiningGraph,
    GraphError,
    ParseError,
    blow_up,
    center_split,
    components_outside_star,
    find_sils,
    graph_distance,
    link_star,
    parse_graph,
)
from graphprod.graph import connected_components, is_connected
from graphprod.sweeps import atlas_graphs, remark_disconnected_check

from conftest import complete_graph, path_graph


def names(g, vs):
    return set(g.sorted_names(vs))


# -- parsing --------------------------------------------------------------------------


def test_parse_two_vertices():
    g = parse_graph("vertex a order 2\nvertex b order 3\nedge a b")
    assert g.names == ("a", "b")
    assert g.orders == (2, 3)
    assert g.edge_names() == [("a", "b")]


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("vertex a order 1", 1),
        ("vertex a order 2\nvertex a order 3", 2),
        ("vertex a order 2\nvertex b order 2\nedge a b\nedge b a", 4),
        ("vertex a order 2\nedge a a", 2),
        ("vertex a order 2\n\nedge a c", 3),
        ("vertex a order two", 1),
        ("vertex a", 1),
        ("node a order 2", 1),
        ("vertex a-b order 2", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as e:
        parse_graph(text)
    assert e.value.lineno == lineno
    assert f"line {lineno}" in str(e.value)


def test_parse_comments_and_inf():
    g = parse_graph("# header\nvertex a order inf  # free\nvertex b order 4\n")
    assert g.orders == (INF, 4)
    assert g.edges == frozenset()


def test_roundtrip_text(ladder):
    assert parse_graph(ladder.to_text()) == ladder


def test_p6_file(p6):
    assert p6.names == tuple(f"v{i}" for i in range(1, 7))
    assert p6.edge_names() == [(f"v{i}", f"v{i + 1}") for i in range(1, 6)]


# -- link, star, components -------------------------------------------------------------


def test_link_star_p6(p6):
    lk, st = link_star(p6, "v3")
    assert names(p6, lk) == {"v2", "v4"}
    assert names(p6, st) == {"v2", "v3", "v4"}


def test_link_star_isolated():
    g = DefiningGraph.build([("a", 2), ("b", 2)])
    lk, st = link_star(g, "a")
    assert lk == frozenset() and names(g, st) == {"a"}


def test_link_ladder(ladder):
    assert names(ladder, link_star(ladder, "a3")[0]) == {"a2", "a4", "b3"}


def test_unknown_vertex(p6):
    with pytest.raises(GraphError):
        link_star(p6, "v9")
    with pytest.raises(GraphError):
        graph_distance(p6, "v1", "nope")


def test_components_outside_star(p6):
    assert [names(p6, c) for c in components_outside_star(p6, "v3")] == [{"v1"}, {"v5", "v6"}]
    assert [names(p6, c) for c in components_outside_star(p6, "v1")] == [{"v3", "v4", "v5", "v6"}]
    assert components_outside_star(complete_graph(4), "k2") == []


def test_components_partition_complement():
    for g in atlas_graphs(6):
        for v in range(len(g)):
            comps = components_outside_star(g, v)
            _, st = link_star(g, v)
            union = set().union(*comps) if comps else set()
            assert union == set(range(len(g))) - st
            assert sum(len(c) for c in comps) == len(union)
            assert [min(c) for c in comps] == sorted(min(c) for c in comps)


# -- distance ------------------------------------------------------------------------------


def test_distance(p6):
    assert graph_distance(p6, "v1", "v3") == 2
    assert graph_distance(p6, "v4", "v4") == 0
    assert graph_distance(p6, "v1", "v6") == 5
    g = DefiningGraph.build([("a", 2), ("b", 2), ("c", 2)], [("a", "b")])
    assert graph_distance(g, "a", "c") == math.inf


# -- SILs ----------------------------------------------------------------------------------


def test_ladder_has_no_sils(ladder):
    assert find_sils(ladder) == []


def test_p6_has_no_sils(p6):
    assert find_sils(p6) == []


def test_tripod_plus_witness(tripod):
    described = [s.describe(tripod) for s in find_sils(tripod)]
    assert "(x, y, {z})" in described
    assert described == ["(x, y, {z})", "(x, z, {y})", "(y, z, {x,xp})"]


def test_sil_witness_invariants():
    for g in atlas_graphs(6):
        for s in find_sils(g):
            assert s.v < s.w
            assert graph_distance(g, s.v, s.w) >= 2
            assert s.v not in s.component and s.w not in s.component
            common = g.adj[s.v] & g.adj[s.w]
            assert not (set(s.component) & common)
            # a full component: no edge leaves it inside the complement of common
            outside = set(range(len(g))) - common - set(s.component)
            assert not any(g.adjacent(a, b) for a in s.component for b in outside)


def test_sils_symmetric_in_the_pair():
    # the condition only depends on the unordered pair, so each pair is reported once
    for g in atlas_graphs(5):
        sils = find_sils(g)
        assert len(sils) == len(set(sils))
        for s in sils:
            rev = DefiningGraph(tuple(reversed(g.names)), tuple(reversed(g.orders)),
                                frozenset(tuple(sorted((len(g) - 1 - a, len(g) - 1 - b))) for a, b in g.edges))
            back = {(len(g) - 1 - t.w, len(g) - 1 - t.v, tuple(sorted(len(g) - 1 - x for x in t.component)))
                    for t in find_sils(rev)}
            assert (s.v, s.w, s.component) in back


def test_remark_disconnected_exhaustive():
    rep = remark_disconnected_check(6)
    assert rep.ok, rep.render()
    assert rep.checked > 50


def test_two_cliques_have_no_sil_but_three_components_do():
    g = DefiningGraph.build([("a", 2), ("b", 2), ("c", 3)], [("a", "b")])
    assert find_sils(g) == []
    h = DefiningGraph.build([("a", 2), ("b", 2), ("c", 3)])
    assert find_sils(h)


# -- center split -------------------------------------------------------------------------------


def test_center_split_p3():
    g = path_graph(3)
    delta, g0 = center_split(g)
    assert names(g, delta) == {"v2"}
    assert g0.names == ("v1", "v3") and g0.edges == frozenset()


def test_center_split_complete_and_p6(p6):
    delta, g0 = center_split(complete_graph(3))
    assert len(delta) == 3 and len(g0) == 0
    delta, g0 = center_split(p6)
    assert delta == frozenset() and g0 == p6


# -- blow-up -------------------------------------------------------------------------------------


def test_blow_up_split_factor():
    g = blow_up({"v": [2, 3]})
    assert g.names == ("v.1", "v.2") and g.orders == (2, 3)
    assert g.edge_names() == [("v.1", "v.2")]


def test_blow_up_single_cyclic():
    g = blow_up({"v": [4]})
    assert g.names == ("v.1",) and g.orders == (4,) and not g.edges


def test_blow_up_edge_gives_triangle():
    g = blow_up([("a", [2]), ("b", [2, INF])], [("a", "b")])
    assert g.orders == (2, 2, INF)
    assert len(g.edges) == 3


def test_blow_up_edge_relations_by_oracle():
    # Z/2 x (Z/2 x Z) presented on the triangle: every pair of generators commutes
    from graphprod.words import oracle_equal

    g = blow_up([("a", [2]), ("b", [2, INF])], [("a", "b")])
    for x, y in combinations(range(3), 2):
        assert oracle_equal(g, [(x, 1), (y, 1)], [(y, 1), (x, 1)])


def test_blow_up_rejects_decomposable():
    with pytest.raises(GraphError, match="'v'"):
        blow_up({"v": [6]})
    with pytest.raises(GraphError):
        blow_up({"v": []})


def test_blow_up_structure():
    factors = {"a": [2, 4], "b": [3], "c": [INF, 5, 7]}
    g = blow_up(factors, [("a", "b"), ("b", "c")])
    assert len(g) == 6
    groups = {v: [g.vid(f"{v}.{k}") for k in range(1, len(fs) + 1)] for v, fs in factors.items()}
    for vs in groups.values():
        assert g.is_clique(vs)
    assert all(g.adjacent(x, y) for x in groups["a"] for y in groups["b"])
    assert not any(g.adjacent(x, y) for x in groups["a"] for y in groups["c"])


def test_connected_components_sorted():
    g = DefiningGraph.build([("a", 2), ("b", 2), ("c", 2), ("d", 2)], [("a", "c")])
    assert [sorted(c) for c in connected_components(g)] == [[0, 2], [1], [3]]
    assert not is_connected(g)
