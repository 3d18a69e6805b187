"""Capacitated domination on a tree partition.

Compares the tree-partition solver with brute force on a path and on a
small red-blue instance, and shows the over-budget report.

Run with ``python demos/domination.py``.
"""
from gonflow import CdsInstance, CrbdsInstance, WeightedGraph, solve_cds, solve_crbds
from gonflow.oracles import oracle_cds, oracle_crbds
from gonflow.trees import bfs_layer_partition


def path_of_five():
    G = WeightedGraph.from_edges([(i, i + 1) for i in range(4)])
    for budget in (2, 3):
        inst = CdsInstance(G, {v: 1 for v in G.vertices}, budget)
        res = solve_cds(inst, bfs_layer_partition(G, 0))
        print(f"path of 5, unit capacities, budget {budget}: {res.status} (minimum {res.size}, "
              f"brute force {oracle_cds(inst)[0]})")
        if res.status == "size":
            print("  dominators:", sorted(res.witness.dominators), "assignment:", res.witness.assignment)


def red_blue():
    G = WeightedGraph.from_edges([("r1", "b1"), ("r1", "b2"), ("r2", "b2"), ("r2", "b3"), ("r3", "b3")])
    inst = CrbdsInstance(G, {"r1", "r2", "r3"}, {"b1", "b2", "b3"}, {"r1": 2, "r2": 1, "r3": 1}, 2)
    res = solve_crbds(inst, bfs_layer_partition(G))
    print("\nred-blue instance:", res.status, res.size, "brute force:", oracle_crbds(inst)[0])
    print("  dominators:", sorted(res.witness.dominators), "assignment:", res.witness.assignment)


if __name__ == "__main__":
    path_of_five()
    red_blue()
