import pytest

from gonflow.graphs import WeightedGraph, weighted_to_multigraph
from gonflow.trees import (
    HarmonicMorphism,
    PathDecomposition,
    TreePartition,
    morphism_to_tree_partition,
    replay_refinement,
    validate_harmonic_morphism,
    validate_path_decomposition,
    validate_tree_partition,
)

PATH3 = WeightedGraph.from_edges([("a", "b"), ("b", "c")])
CYCLE4 = WeightedGraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def path_partition(*bags):
    names = [f"p{i}" for i in range(len(bags))]
    return TreePartition(dict(zip(names, bags)), tuple(zip(names, names[1:])), names[0])


def test_path_singletons_have_breadth_one():
    rep = validate_tree_partition(PATH3, path_partition({"a"}, {"b"}, {"c"}))
    assert rep.ok and rep.breadth == 1


def test_four_cycle_partition_has_breadth_two():
    rep = validate_tree_partition(CYCLE4, path_partition({"a"}, {"b", "d"}, {"c"}))
    assert rep.ok and rep.breadth == 2


def test_vertex_in_two_bags_is_rejected():
    rep = validate_tree_partition(PATH3, path_partition({"a", "b"}, {"b", "c"}))
    assert not rep.ok
    assert any("b" in v for v in rep.violations)


def test_edge_between_distant_bags_is_rejected():
    G = WeightedGraph.from_edges([("a", "b"), ("b", "c"), ("c", "a")])
    assert not validate_tree_partition(G, path_partition({"a"}, {"b"}, {"c"})).ok


def test_non_tree_is_rejected():
    T = TreePartition({0: {"a"}, 1: {"b"}, 2: {"c"}}, ((0, 1), (1, 2), (2, 0)), 0)
    assert not validate_tree_partition(PATH3, T).ok


def test_path_decomposition_width():
    rep = validate_path_decomposition(CYCLE4, PathDecomposition(({"a", "b", "d"}, {"b", "c", "d"})))
    assert rep.ok and rep.width == 2
    assert not validate_path_decomposition(CYCLE4, PathDecomposition(({"a", "b"}, {"c", "d"}))).ok


def identity_morphism(G: WeightedGraph) -> HarmonicMorphism:
    H = weighted_to_multigraph(G)
    arcs = {e.id: (e.u, e.v) for e in G.edges}
    emap = {e.id: H.edge_origin[e.id] for e in H.edges}
    return HarmonicMorphism(H, G.vertices, arcs, {v: v for v in G.vertices}, emap,
                            {e.id: 1 for e in H.edges})


def fold_morphism() -> HarmonicMorphism:
    H = weighted_to_multigraph(CYCLE4)
    vmap = {"a": "p0", "b": "p1", "d": "p1", "c": "p2"}
    arcs = {"x": ("p0", "p1"), "y": ("p1", "p2")}
    emap = {}
    for e in H.edges:
        emap[e.id] = "x" if "a" in (e.u, e.v) else "y"
    return HarmonicMorphism(H, ("p0", "p1", "p2"), arcs, vmap, emap, {e.id: 1 for e in H.edges})


def test_tree_identity_has_degree_one():
    rep = validate_harmonic_morphism(identity_morphism(PATH3))
    assert rep.ok and rep.degree == 1


def test_four_cycle_fold_has_degree_two():
    rep = validate_harmonic_morphism(fold_morphism())
    assert rep.ok and rep.degree == 2


def test_unbalanced_indices_break_harmonicity():
    H = weighted_to_multigraph(PATH3)
    M = HarmonicMorphism(H, ("p", "q", "r"), {0: ("p", "q"), 1: ("q", "r")},
                         {"a": "p", "b": "q", "c": "r"}, {0: 0, 1: 1}, {0: 1, 1: 2})
    rep = validate_harmonic_morphism(M)
    assert not rep.ok
    assert any("harmonic" in v and "'b'" in v for v in rep.violations)


def test_identity_gives_singleton_bags():
    sub = morphism_to_tree_partition(PATH3, identity_morphism(PATH3))
    rep = validate_tree_partition(sub.graph, sub.partition)
    assert rep.ok and rep.breadth == 1
    assert sorted(len(b) for b in sub.partition.bags.values() if b) == [1, 1, 1]
    assert not sub.subdivision


def test_fold_gives_three_bags():
    sub = morphism_to_tree_partition(CYCLE4, fold_morphism())
    rep = validate_tree_partition(sub.graph, sub.partition)
    assert rep.ok and rep.breadth == 2
    bags = sorted((frozenset(b) for b in sub.partition.bags.values() if b), key=sorted)
    assert bags == [frozenset("a"), frozenset("bd"), frozenset("c")]
    assert len(sub.partition.bags) <= 8


def test_heavy_path_gives_breadth_two():
    # every vertex alone in a bag, consecutive bags joined by weight-2 edges
    G = WeightedGraph.from_edges([("a", "b", 2), ("b", "c", 2), ("c", "d", 2)])
    M = identity_morphism(G)
    assert validate_harmonic_morphism(M).degree == 2
    sub = morphism_to_tree_partition(G, M)
    rep = validate_tree_partition(sub.graph, sub.partition)
    assert rep.ok and rep.breadth == 2
    assert all(len(b) <= 1 for b in sub.partition.bags.values())


def test_morphism_without_provenance_is_rejected():
    M = fold_morphism()
    bare = HarmonicMorphism(type(M.source)(M.source.vertices, M.source.edges), M.tree_nodes,
                            M.tree_arcs, M.vmap, M.emap, M.index)
    with pytest.raises(ValueError):
        morphism_to_tree_partition(CYCLE4, bare)


def test_empty_trace_is_identity():
    H = replay_refinement(PATH3, ())
    assert set(H.vertices) == set(PATH3.vertices) and len(H.edges) == 2


def test_subdivide_once():
    H = replay_refinement(PATH3, [("subdivide", 0)])
    assert len(H.vertices) == 4 and len(H.edges) == 3
    assert 0 not in H.edge_map
    new = [v for v in H.vertices if v not in PATH3.vertices]
    assert len(new) == 1 and len(H.incident[new[0]]) == 2
    assert H.subdivided[new[0]] == 0


def test_two_leaves_at_one_vertex():
    H = replay_refinement(PATH3, [("leaf", "b"), ("leaf", "b")])
    new = [v for v in H.vertices if v not in PATH3.vertices]
    assert len(new) == 2
    for v in new:
        (e,) = H.incident[v]
        assert e.other(v) == "b"


@pytest.mark.parametrize("trace", [[("leaf", "zz")], [("subdivide", 9)], [("grow", "a")]])
def test_dangling_trace_is_rejected(trace):
    with pytest.raises(ValueError):
        replay_refinement(PATH3, trace)
