from gonflow.graphs import Arc, FlowNetwork, WeightedGraph
from gonflow.oracles import oracle_aonf, oracle_cds, oracle_crbds, oracle_oro, oracle_uflb
from gonflow.problems import AonfInstance, CdsInstance, CoInstance, CrbdsInstance, OroInstance, UflbInstance
from conftest import triangle


def test_unit_triangle_is_orientable():
    assert oracle_oro(OroInstance(triangle(), {v: (1, 1) for v in "abc"})) is not None


def test_edge_must_leave_someone():
    G = WeightedGraph.from_edges([("u", "v")])
    assert oracle_oro(OroInstance(G, {"u": (0, 0), "v": (0, 0)})) is None


def test_empty_interval():
    G = WeightedGraph.from_edges([("u", "v")])
    assert oracle_oro(OroInstance(G, {"u": (1, 0), "v": (0, 1)})) is None


def test_enumeration_and_ilp_routes_agree(rng):
    from gonflow.sampling import random_aonf, random_oro
    for _ in range(60):
        inst = random_oro(rng)
        assert (oracle_oro(inst, method="enumerate") is None) == (oracle_oro(inst, method="ilp") is None)
        flow = random_aonf(rng)
        assert (oracle_aonf(flow, method="enumerate") is None) == (oracle_aonf(flow, method="ilp") is None)


def test_single_arc_any_capacity():
    N = FlowNetwork(("s", "t"), (Arc(0, "s", "t", 5),), "s", "t")
    assert oracle_aonf(AonfInstance(N, 5)) == {0: 5}


def test_serial_arcs_with_different_caps():
    N = FlowNetwork(("s", "m", "t"), (Arc(0, "s", "m", 2), Arc(1, "m", "t", 3)), "s", "t")
    assert oracle_aonf(AonfInstance(N, 2)) is None


def test_diamond_routes_agree():
    N = FlowNetwork(("s", "a", "b", "t"), (Arc(0, "s", "a", 2), Arc(1, "a", "t", 2),
                                            Arc(2, "s", "b", 3), Arc(3, "b", "t", 3)), "s", "t")
    for R in range(7):
        inst = AonfInstance(N, R)
        a, b = oracle_aonf(inst, method="enumerate"), oracle_aonf(inst, method="ilp")
        assert (a is None) == (b is None) == (R not in (0, 2, 3, 5))


def test_uflb_tight_bounds_is_co():
    G = WeightedGraph.from_edges([("a", "b", 2), ("b", "c", 1), ("c", "a", 1)])
    inst = UflbInstance(G, {e.id: e.weight for e in G.edges}, "a", "b", 0)
    assert (oracle_uflb(inst) is None) == (oracle_oro(CoInstance(G)) is None)


def test_uflb_single_edge():
    G = WeightedGraph.from_edges([("s", "t", 2)])
    w = oracle_uflb(UflbInstance(G, {0: 1}, "s", "t", 1))
    assert w is not None and w.flow == {0: 1} and w.orientation == {0: ("s", "t")}


def test_uflb_value_above_cut():
    G = WeightedGraph.from_edges([("s", "m", 3), ("m", "t", 1)])
    assert oracle_uflb(UflbInstance(G, {}, "s", "t", 2)) is None


def test_crbds_pair_and_deficit():
    G = WeightedGraph.from_edges([("r", "b")])
    assert oracle_crbds(CrbdsInstance(G, {"r"}, {"b"}, {"r": 1}, 1))[0] == 1
    H = WeightedGraph.from_edges([("r", "b1"), ("r", "b2")])
    assert oracle_crbds(CrbdsInstance(H, {"r"}, {"b1", "b2"}, {"r": 1}, 1)) is None


def test_cds_five_path():
    G = WeightedGraph.from_edges([(i, i + 1) for i in range(4)])
    size, w = oracle_cds(CdsInstance(G, {v: 1 for v in G.vertices}, 5))
    # each dominator covers itself and at most one neighbour
    assert size == 3
