import pytest

from gonflow.graphs import WeightedGraph, weighted_outdegrees
from gonflow.ilp import ResourceLimitError
from gonflow.oracles import oracle_aonf, oracle_oro, oracle_uflb
from gonflow.oro import OroDP, preprocess, solve_family, solve_oro
from gonflow.problems import AonfInstance, CoInstance, OroInstance, UflbInstance, witness_violations
from gonflow.graphs import Arc, FlowNetwork
from gonflow.trees import TreePartition, subdivide_along
from conftest import triangle


def chain(*bags):
    names = [f"n{i}" for i in range(len(bags))]
    return TreePartition(dict(zip(names, bags)), tuple(zip(names, names[1:])), names[0])


def star_partition(center, leaves):
    bags = {"c": {center}}
    bags.update({f"l{x}": {x} for x in leaves})
    return TreePartition(bags, tuple(("c", f"l{x}") for x in leaves), "c")


def test_preprocess_adds_an_empty_root():
    G = WeightedGraph.from_edges([("u", "v")])
    inst = OroInstance(G, {"u": (0, 1), "v": (0, 1)})
    prep = preprocess(inst, chain({"u"}, {"v"}))
    assert prep.graph is G and prep.intervals == inst.intervals
    assert prep.partition.bags[prep.partition.root] == frozenset()
    assert len(prep.partition.bags) == 3


def test_preprocess_pins_subdivision_vertices():
    G = WeightedGraph.from_edges([("u", "v", 3)])
    inst = OroInstance(G, {"u": (0, 3), "v": (0, 3)})
    sub = subdivide_along(G, {0: ("u", "x", "v")}, chain({"u"}, {"x"}, {"v"}))
    prep = preprocess(inst, sub)
    assert prep.intervals["x"] == (3, 3)
    assert sorted(e.weight for e in prep.graph.edges) == [3, 3]


def _leaf_dp(v_interval):
    G = WeightedGraph.from_edges([("u", "v")])
    inst = OroInstance(G, {"u": (0, 1), "v": v_interval})
    return OroDP(preprocess(inst, chain({"u"}, {"v"})))


def test_leaf_table_lists_both_orientations():
    assert _leaf_dp((0, 1)).leaf_arc_table("n1") == {(0,), (1,)}


def test_leaf_table_empty_for_unreachable_target():
    assert _leaf_dp((5, 5)).leaf_arc_table("n1") == frozenset()


def test_empty_child_table_propagates():
    G = WeightedGraph.from_edges([("u", "v"), ("v", "w")])
    inst = OroInstance(G, {"u": (0, 1), "v": (0, 2), "w": (5, 5)})
    dp = OroDP(preprocess(inst, chain({"u"}, {"v"}, {"w"})))
    assert not dp.run()
    assert dp.tables["n2"] == frozenset() and dp.tables["n1"] == frozenset()


@pytest.mark.parametrize("center", [(0, 0), (1, 1), (2, 2), (3, 3)])
def test_identical_children_must_fit_parent_interval(center):
    # two leaves forced to point away from the centre's edges
    G = WeightedGraph.from_edges([("c", "x"), ("c", "y")])
    inst = OroInstance(G, {"c": center, "x": (0, 0), "y": (0, 0)})
    T = star_partition("c", "xy")
    for route in ("ilp", "sumset"):
        res = solve_oro(inst, T, blueprint=route)
        assert res.yes == (oracle_oro(inst) is not None) == (center == (2, 2))


def test_triangle_unit_targets():
    inst = OroInstance(triangle(), {v: (1, 1) for v in "abc"})
    res = solve_oro(inst, chain({"a"}, {"b", "c"}))
    assert res.yes and oracle_oro(inst) is not None
    assert weighted_outdegrees(inst.graph, res.orientation) == {"a": 1, "b": 1, "c": 1}


def test_triangle_zero_targets():
    inst = OroInstance(triangle(), {v: (0, 0) for v in "abc"})
    assert not solve_oro(inst, chain({"a"}, {"b", "c"})).yes


def test_star_needs_exactly_one_inward_edge():
    G = WeightedGraph.from_edges([("c", x) for x in "xyz"])
    inst = OroInstance(G, {"c": (2, 2), "x": (0, 1), "y": (0, 1), "z": (0, 1)})
    res = solve_oro(inst, star_partition("c", "xyz"))
    assert res.yes and oracle_oro(inst) is not None
    inward = [eid for eid, (t, h) in res.orientation.items() if h == "c"]
    assert len(inward) == 1


def test_breadth_limit_raises():
    G = WeightedGraph.from_edges([("u", "v", 5)])
    inst = OroInstance(G, {"u": (0, 5), "v": (0, 5)})
    with pytest.raises(ResourceLimitError):
        solve_oro(inst, chain({"u"}, {"v"}), max_breadth=4)


def test_invalid_partition_is_rejected():
    inst = OroInstance(triangle(), {v: (1, 1) for v in "abc"})
    with pytest.raises(ValueError):
        solve_oro(inst, chain({"a"}, {"b"}, {"c"}))


def test_co_even_cycle():
    G = WeightedGraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    res = solve_family(CoInstance(G), chain({"a"}, {"b", "d"}, {"c"}))
    assert res.yes
    assert witness_violations(CoInstance(G), res.witness) == []


def test_aonf_single_arc():
    N = FlowNetwork(("s", "t"), (Arc(0, "s", "t", 2),), "s", "t")
    res = solve_family(AonfInstance(N, 2))
    assert res.yes and res.witness == {0: 2}


def test_uflb_tight_bounds_match_co():
    G = WeightedGraph.from_edges([("a", "b", 1), ("b", "c", 2), ("c", "a", 1)])
    uflb = UflbInstance(G, {e.id: e.weight for e in G.edges}, "a", "c", 0)
    got = solve_family(uflb, chain({"a"}, {"b", "c"}))
    assert got.yes == (oracle_uflb(uflb) is not None) == (oracle_oro(CoInstance(G)) is not None)


def test_family_witnesses_are_valid(rng):
    from gonflow.sampling import random_aonf, random_co, random_uflb
    from gonflow.trees import bfs_layer_partition
    for make in (random_co, random_uflb, random_aonf):
        for _ in range(25):
            inst = make(rng)
            G = inst.network if isinstance(inst, AonfInstance) else inst.graph
            res = solve_family(inst, bfs_layer_partition(G))
            if isinstance(inst, AonfInstance):
                expected = oracle_aonf(inst) is not None
            elif isinstance(inst, UflbInstance):
                expected = oracle_uflb(inst) is not None
            else:
                expected = oracle_oro(inst) is not None
            assert res.yes == expected
            if res.yes:
                assert witness_violations(inst, res.witness) == []
