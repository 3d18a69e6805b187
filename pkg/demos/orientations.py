"""Orientation and flow problems solved from a tree partition.

Walks through three small cases:

1. a triangle whose vertices must each have outdegree exactly 1,
2. a 4-cycle folded onto a path by a degree-2 harmonic morphism, whose
   tree partition then drives the circulating-orientation solver,
3. an all-or-nothing flow, solved through its orientation encoding.

Run with ``python demos/orientations.py``.
"""
from pathlib import Path

from gonflow import (
    AonfInstance,
    Arc,
    CoInstance,
    FlowNetwork,
    OroInstance,
    TreePartition,
    WeightedGraph,
    morphism_to_tree_partition,
    solve_family,
    solve_oro,
    validate_harmonic_morphism,
    validate_tree_partition,
    weighted_outdegrees,
)
from gonflow.formats import parse_morphism
from gonflow.oracles import oracle_aonf

DATA = Path(__file__).parent / "data"


def triangle():
    G = WeightedGraph.from_edges([("a", "b"), ("b", "c"), ("c", "a")])
    inst = OroInstance(G, {v: (1, 1) for v in G.vertices})
    # the vertex a alone, b and c together
    T = TreePartition({0: {"a"}, 1: {"b", "c"}}, ((0, 1),), 0)
    print("triangle partition:", validate_tree_partition(G, T))
    res = solve_oro(inst, T)
    print("exact outdegree 1 everywhere:", "yes" if res.yes else "no")
    print("  orientation:", res.orientation)
    print("  outdegrees:", weighted_outdegrees(G, res.orientation))


def folded_cycle():
    pm = parse_morphism((DATA / "cycle4_fold.morph").read_text())
    rep = validate_harmonic_morphism(pm.morphism)
    print("\n4-cycle fold: degree", rep.degree)
    sub = morphism_to_tree_partition(pm.graph, pm.morphism)
    bags = [sorted(b) for b in sub.partition.bags.values() if b]
    print("  bags from the morphism:", bags)
    print("  breadth:", validate_tree_partition(sub.graph, sub.partition).breadth)
    res = solve_family(CoInstance(pm.graph), sub.partition)
    print("  circulating orientation:", res.witness if res.yes else "none")


def all_or_nothing():
    arcs = (Arc(0, "s", "a", 2), Arc(1, "a", "t", 2), Arc(2, "s", "b", 3), Arc(3, "b", "t", 3))
    N = FlowNetwork(("s", "a", "b", "t"), arcs, "s", "t")
    print("\nall-or-nothing flow on a diamond with capacities 2 and 3:")
    for R in range(7):
        res = solve_family(AonfInstance(N, R))
        check = oracle_aonf(AonfInstance(N, R)) is not None
        print(f"  R={R}: {'yes' if res.yes else 'no '} (enumeration agrees: {res.yes == check})",
              res.witness if res.yes else "")


if __name__ == "__main__":
    triangle()
    folded_cycle()
    all_or_nothing()
