"""Hard instance families and their certificates.

Builds the all-or-nothing flow network for a small counter machine, turns
an accepting run into a flow, and encodes a bin packing instance as an
exact-outdegree orientation problem.

Run with ``python demos/hardness.py``.
"""
from gonflow.graphs import check_flow
from gonflow.hardness import NnccmMachine, binpacking_to_too, nnccm_to_aonf, witness_flow_from_run
from gonflow.oracles import oracle_binpacking, oracle_nnccm, oracle_oro
from gonflow.trees import validate_path_decomposition


def counter_machine():
    m = NnccmMachine(2, 1, ((1, 0, 2, 0), (1, 1, 2, 1)))
    net = nnccm_to_aonf(m)
    N = net.instance.network
    print("counter machine with 2 counters, bound 1, 2 checks")
    print("  network:", len(N.vertices), "vertices,", len(N.arcs), "arcs,", "manifest", net.manifest)
    print("  path decomposition width:", validate_path_decomposition(N, net.decomposition).width)
    run = oracle_nnccm(m)
    print("  accepting run:", run)
    f = witness_flow_from_run(m, run, net)
    rep = check_flow(N, f, net.instance.value)
    print("  flow from the run is valid:", rep.ok, "value", rep.value)


def bin_packing():
    for items, size in (([1, 2, 3], 3), ([2, 2, 2], 3)):
        po = binpacking_to_too(items, size, 2)
        yes = oracle_oro(po.instance) is not None
        print(f"\nitems {items} into 2 bins of size {size}: packing {oracle_binpacking(items, size, 2)}, "
              f"orientation {'exists' if yes else 'does not exist'}")


if __name__ == "__main__":
    counter_machine()
    bin_packing()
