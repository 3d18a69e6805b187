import pytest

from gonflow.graphs import (
    Arc,
    Edge,
    FlowNetwork,
    Multigraph,
    WeightedGraph,
    check_flow,
    max_flow,
    multigraph_to_weighted,
    weighted_outdegrees,
    weighted_to_multigraph,
)
from conftest import triangle


def test_triangle_expands_to_six_unit_edges():
    M = weighted_to_multigraph(triangle((1, 2, 3)))
    assert len(M.edges) == 6
    assert set(M.vertices) == {"a", "b", "c"}


def test_unit_weights_keep_edge_count():
    G = triangle()
    M = weighted_to_multigraph(G)
    assert len(M.edges) == 3
    assert sorted(frozenset((e.u, e.v)) for e in M.edges) == sorted(frozenset((e.u, e.v)) for e in G.edges)


def test_single_heavy_edge_round_trip():
    G = WeightedGraph.from_edges([("u", "v", 5)])
    M = weighted_to_multigraph(G)
    assert len(M.vertices) == 2 and len(M.edges) == 5
    back = multigraph_to_weighted(M)
    assert [(e.u, e.v, e.weight) for e in back.edges] == [("u", "v", 5)]


def test_parallel_edges_merge():
    M = Multigraph(("u", "v"), tuple(Edge(i, "u", "v") for i in range(3)))
    G = multigraph_to_weighted(M)
    assert [e.weight for e in G.edges] == [3]


def test_simple_multigraph_gets_unit_weights():
    M = Multigraph(("a", "b", "c"), (Edge(0, "a", "b"), Edge(1, "b", "c")))
    assert all(e.weight == 1 for e in multigraph_to_weighted(M).edges)


def test_loop_is_rejected():
    M = Multigraph(("v", "w"), (Edge(0, "v", "v"), Edge(1, "v", "w")))
    with pytest.raises(ValueError):
        multigraph_to_weighted(M)


@pytest.mark.parametrize("edges", [
    [Edge(0, "a", "a")],
    [Edge(0, "a", "b", 0)],
    [Edge(0, "a", "b"), Edge(1, "b", "a")],
    [Edge(0, "a", "b"), Edge(0, "a", "c")],
    [Edge(0, "a", "z")],
])
def test_weighted_graph_rejects_malformed_edges(edges):
    with pytest.raises(ValueError):
        WeightedGraph(("a", "b", "c"), tuple(edges))


def test_cyclic_triangle_outdegrees():
    o = {0: ("a", "b"), 1: ("b", "c"), 2: ("c", "a")}
    assert weighted_outdegrees(triangle(), o) == {"a": 1, "b": 1, "c": 1}


def test_star_out_of_center():
    G = WeightedGraph.from_edges([("c", x) for x in "xyz"])
    o = {e.id: ("c", e.v) for e in G.edges}
    assert weighted_outdegrees(G, o) == {"c": 3, "x": 0, "y": 0, "z": 0}


def test_heavy_edge_outdegree():
    G = WeightedGraph.from_edges([("u", "v", 4)])
    assert weighted_outdegrees(G, {0: ("u", "v")}) == {"u": 4, "v": 0}


def test_partial_orientation_is_rejected():
    with pytest.raises(ValueError):
        weighted_outdegrees(triangle(), {0: ("a", "b")})


def _net(arcs, vertices=("s", "m", "t")):
    return FlowNetwork(vertices, tuple(arcs), "s", "t")


def test_zero_flow_is_valid():
    N = _net([Arc(0, "s", "m", 2), Arc(1, "m", "t", 2)])
    rep = check_flow(N, {0: 0, 1: 0})
    assert rep.ok and rep.value == 0


def test_single_arc_full_flow():
    N = _net([Arc(0, "s", "t", 2)], ("s", "t"))
    rep = check_flow(N, {0: 2})
    assert rep.ok and rep.value == 2


def test_conservation_violation_reported():
    N = _net([Arc(0, "s", "m", 3), Arc(1, "m", "t", 3)])
    rep = check_flow(N, {0: 2, 1: 1})
    assert not rep.ok
    assert any("m" in v for v in rep.violations)


def test_lower_bound_violation_reported():
    N = _net([Arc(0, "s", "m", 3, 2), Arc(1, "m", "t", 3)])
    assert not check_flow(N, {0: 1, 1: 1}).ok


def test_max_flow_single_arc():
    N = _net([Arc(0, "s", "t", 3)], ("s", "t"))
    assert check_flow(N, max_flow(N)).value == 3


def test_max_flow_two_disjoint_paths():
    N = FlowNetwork(("s", "a", "b", "t"), (Arc(0, "s", "a", 2), Arc(1, "a", "t", 2),
                                            Arc(2, "s", "b", 5), Arc(3, "b", "t", 5)), "s", "t")
    f = max_flow(N)
    assert check_flow(N, f).ok and check_flow(N, f).value == 7


def test_max_flow_diamond_bottleneck():
    # outer arcs are wide; each middle arc has capacity 1
    N = FlowNetwork(("s", "a", "b", "t"), (Arc(0, "s", "a", 5), Arc(1, "s", "b", 5),
                                            Arc(2, "a", "t", 1), Arc(3, "b", "t", 1)), "s", "t")
    f = max_flow(N)
    assert check_flow(N, f).value == 2
