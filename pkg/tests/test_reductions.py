import pytest

from gonflow.graphs import Arc, FlowNetwork, WeightedGraph, check_flow, weighted_outdegrees
from gonflow.oracles import oracle_aonf, oracle_cds, oracle_crbds, oracle_oro, oracle_uflb
from gonflow.problems import (
    AonfInstance,
    CdsInstance,
    CmoInstance,
    CoInstance,
    MmoInstance,
    TooInstance,
    UflbInstance,
    witness_violations,
)
from gonflow.reductions import aonf_to_too, cds_to_crbds, lift_to_oro, too_to_cmo, too_to_co, uflb_to_co
from gonflow.trees import validate_tree_partition
from conftest import triangle

EDGE = WeightedGraph.from_edges([("u", "v")])


def test_mmo_lifts_to_unit_intervals():
    red = lift_to_oro(MmoInstance(triangle(), 1))
    assert red.instance.intervals == {v: (0, 1) for v in "abc"}


def test_co_lifts_to_half_degree_targets():
    red = lift_to_oro(CoInstance(WeightedGraph.from_edges([("u", "v", 2)])))
    assert red.instance.intervals == {"u": (1, 1), "v": (1, 1)}


def test_co_with_odd_degree_is_trivial_no():
    G = WeightedGraph.from_edges([("u", "v", 2), ("v", "w", 1)])
    red = lift_to_oro(CoInstance(G))
    assert red.notes["trivial_no"]
    assert oracle_oro(red.instance) is None


def test_too_and_cmo_lift():
    assert lift_to_oro(TooInstance(EDGE, {"u": 1, "v": 0})).instance.intervals == {"u": (1, 1), "v": (0, 0)}
    assert lift_to_oro(CmoInstance(EDGE, {"u": 1, "v": 0})).instance.intervals == {"u": (0, 1), "v": (0, 0)}


def test_single_arc_aonf_to_too():
    N = FlowNetwork(("s", "t"), (Arc(0, "s", "t", 2),), "s", "t")
    red = aonf_to_too(AonfInstance(N, 2))
    too = red.instance
    (m,) = [v for v in too.graph.vertices if v not in ("s", "t")]
    assert sorted(e.weight for e in too.graph.edges) == [2, 2]
    assert too.targets == {"s": 2, m: 2, "t": 0}
    o = {0: ("s", m), 1: (m, "t")}
    assert weighted_outdegrees(too.graph, o) == too.targets
    assert red.pull_back(o) == {0: 2}


def _two_arc(R):
    N = FlowNetwork(("s", "m", "t"), (Arc(0, "s", "m", 2), Arc(1, "m", "t", 2)), "s", "t")
    return AonfInstance(N, R)


def test_zero_value_aonf_reverses_every_arc():
    inst = _two_arc(0)
    red = aonf_to_too(inst)
    o = oracle_oro(red.instance)
    assert o is not None
    assert red.pull_back(o) == {0: 0, 1: 0}
    mids = red.provenance["midpoints"]
    for a in inst.network.arcs:
        # both halves point back toward the tail
        assert o[2 * a.id] == (mids[a.id], a.tail)


def test_odd_value_on_even_caps_is_no_on_both_sides():
    inst = _two_arc(1)
    assert oracle_aonf(inst) is None
    assert oracle_oro(aonf_to_too(inst).instance) is None


def test_too_to_co_unbalanced_edge():
    G = WeightedGraph.from_edges([("u", "v", 2)])
    inst = TooInstance(G, {"u": 2, "v": 0})
    red = too_to_co(inst)
    assert red.notes["alpha"] == 2
    H = red.instance.graph
    s, t = red.provenance["added"]["source"], red.provenance["added"]["sink"]
    added = {frozenset((e.u, e.v)): e.weight for e in H.edges if e.id != 0}
    assert added == {frozenset((t, s)): 2, frozenset((s, "u")): 2, frozenset(("v", t)): 2}
    assert (oracle_oro(inst) is None) == (oracle_oro(red.instance) is None)
    o = oracle_oro(red.instance)
    assert witness_violations(inst, red.pull_back(o)) == []


def test_balanced_too_adds_nothing():
    red = too_to_co(TooInstance(triangle(), {v: 1 for v in "abc"}))
    assert red.notes["alpha"] == 0
    assert len(red.instance.graph.vertices) == 3 and len(red.instance.graph.edges) == 3


def test_balanced_triangle_is_yes_on_both_sides():
    inst = TooInstance(triangle(), {v: 1 for v in "abc"})
    red = too_to_co(inst)
    assert oracle_oro(inst) is not None
    assert oracle_oro(red.instance) is not None


def test_too_to_cmo_keeps_bounds():
    red = too_to_cmo(TooInstance(EDGE, {"u": 1, "v": 0}))
    assert red.instance.bounds == {"u": 1, "v": 0}


def test_too_to_cmo_total_mismatch_is_trivial_no():
    red = too_to_cmo(TooInstance(EDGE, {"u": 1, "v": 1}))
    assert red.notes["trivial_no"]
    assert oracle_oro(red.instance) is None


def test_too_to_cmo_triangle_yes_on_both_sides():
    inst = TooInstance(triangle(), {v: 1 for v in "abc"})
    red = too_to_cmo(inst)
    assert red.instance.bounds == {v: 1 for v in "abc"}
    assert oracle_oro(inst) is not None and oracle_oro(red.instance) is not None


def test_uflb_edge_becomes_heavy_and_light_paths():
    G = WeightedGraph.from_edges([("s", "t", 3)])
    red = uflb_to_co(UflbInstance(G, {0: 1}, "s", "t", 0))
    H = red.instance.graph
    heavy = red.provenance["heavy"][0]
    assert H.edge_map[heavy].weight == 4 and H.edge_map[heavy + 1].weight == 4
    lights = red.provenance["light"][0]
    assert len(lights) == 2
    assert all(H.edge_map[i].weight == 1 and H.edge_map[i + 1].weight == 1 for i in lights)


def test_uflb_tight_bounds_match_co():
    G = WeightedGraph.from_edges([("a", "b", 2), ("b", "c", 2), ("c", "a", 2)])
    inst = UflbInstance(G, {e.id: e.weight for e in G.edges}, "a", "b", 0)
    red = uflb_to_co(inst)
    assert red.provenance["light"] == {}
    assert (oracle_oro(red.instance) is None) == (oracle_oro(CoInstance(G)) is None)
    assert (oracle_uflb(inst) is None) == (oracle_oro(CoInstance(G)) is None)


def test_uflb_two_path_unit_value():
    G = WeightedGraph.from_edges([("s", "m"), ("m", "t")])
    inst = UflbInstance(G, {0: 1, 1: 1}, "s", "t", 1)
    red = uflb_to_co(inst)
    yes = oracle_uflb(inst) is not None
    assert yes
    o = oracle_oro(red.instance)
    assert (o is not None) == yes
    assert witness_violations(inst, red.pull_back(o)) == []


def test_uflb_value_above_cut_is_rejected_early():
    G = WeightedGraph.from_edges([("s", "t", 1)])
    red = uflb_to_co(UflbInstance(G, {}, "s", "t", 2))
    assert red.notes["trivial_no"] and red.notes["cut_capacity"] == 1


def test_cds_single_vertex():
    G = WeightedGraph(("v",), ())
    red = cds_to_crbds(CdsInstance(G, {"v": 1}, 1))
    out = red.instance
    assert len(out.red) == 1 and len(out.blue) == 1 and len(out.graph.edges) == 1
    assert out.capacity == {"rv": 2}
    assert oracle_crbds(out)[0] == 1


# a unit-capacity centre serves one leaf only, so the 3-path needs two dominators
@pytest.mark.parametrize("edges,expected", [([("u", "v")], 1), ([("a", "b"), ("b", "c")], 2)])
def test_cds_small_graphs_agree(edges, expected):
    G = WeightedGraph.from_edges(edges)
    inst = CdsInstance(G, {v: 1 for v in G.vertices}, expected)
    red = cds_to_crbds(inst)
    size, w = oracle_crbds(red.instance)
    assert size == oracle_cds(inst)[0] == expected
    back = red.pull_back(w)
    assert witness_violations(inst, back) == []


def test_cds_partition_breadth_doubles(rng):
    from gonflow.sampling import random_cds
    from gonflow.trees import bfs_layer_partition
    for _ in range(30):
        inst = random_cds(rng)
        T = bfs_layer_partition(inst.graph)
        red = cds_to_crbds(inst, T)
        k = validate_tree_partition(inst.graph, T).breadth
        rep = validate_tree_partition(red.instance.graph, red.partition)
        assert rep.ok and rep.breadth <= 2 * max(k, 1)


def test_aonf_flow_pulls_back_to_valid_flow(rng):
    from gonflow.sampling import random_aonf
    for _ in range(40):
        inst = random_aonf(rng)
        red = aonf_to_too(inst)
        o = oracle_oro(red.instance)
        f = oracle_aonf(inst)
        assert (o is None) == (f is None)
        if o is not None:
            g = red.pull_back(o)
            assert check_flow(inst.network, g, inst.value).ok
