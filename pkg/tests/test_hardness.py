import itertools

import pytest

from gonflow.graphs import check_flow, weighted_outdegrees
from gonflow.hardness import (
    NnccmMachine,
    RunRejected,
    binpacking_to_aonf,
    binpacking_to_too,
    check_run,
    nnccm_to_aonf,
    simulate_nnccm,
    witness_flow_from_run,
)
from gonflow.oracles import oracle_aonf, oracle_binpacking, oracle_nnccm, oracle_oro
from gonflow.trees import validate_path_decomposition


def test_machine_without_tests_accepts():
    m = NnccmMachine(2, 1)
    assert simulate_nnccm(m, []) is None
    assert oracle_nnccm(m) == []


def test_both_halves_fire_on_a_stuck_counter():
    m = NnccmMachine(1, 0, ((1, 0, 1, 0),))
    assert simulate_nnccm(m, [(0,)]) == 1
    assert oracle_nnccm(m) is None


def test_raising_a_counter_escapes_the_test():
    m = NnccmMachine(2, 1, ((1, 0, 2, 0),))
    assert simulate_nnccm(m, [(0, 0)]) == 1
    assert simulate_nnccm(m, [(1, 0)]) is None
    assert oracle_nnccm(m) is not None


@pytest.mark.parametrize("run", [[(1, 0), (0, 0)], [(2, 0), (2, 0)], [(0,), (0,)], [(0, 0)]])
def test_malformed_runs(run):
    m = NnccmMachine(2, 1, ((1, 1, 2, 1), (1, 1, 2, 1)))
    with pytest.raises(ValueError):
        check_run(m, run)


def test_machine_rejects_out_of_range_tests():
    with pytest.raises(ValueError):
        NnccmMachine(1, 1, ((2, 0, 1, 0),))
    with pytest.raises(ValueError):
        NnccmMachine(1, 1, ((1, 2, 1, 0),))


def test_base_capacity_and_value():
    net = nnccm_to_aonf(NnccmMachine(1, 1, ((1, 0, 1, 1),)))
    assert net.manifest["L"] == 4 and net.manifest["R"] == 6
    assert net.instance.value == 6


@pytest.mark.parametrize("k,B,n", [(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 3), (3, 1, 2)])
def test_arc_census(k, B, n):
    tests = tuple((1, 0, k, B) for _ in range(n))
    net = nnccm_to_aonf(NnccmMachine(k, B, tests))
    expected = k + k + k * B * (n + 1) + k * (n + 1) * (B + 1) + k * n * (B + 1) + 5 * n
    assert net.manifest["logical_arcs"] == expected == len(net.arcs_of)
    physical = sum(len(ids) for ids in net.arcs_of.values())
    assert physical == len(net.instance.network.arcs)


def test_network_comes_with_a_narrow_path_decomposition():
    m = NnccmMachine(2, 1, ((1, 0, 2, 0), (1, 1, 2, 1)))
    net = nnccm_to_aonf(m)
    rep = validate_path_decomposition(net.instance.network, net.decomposition)
    assert rep.ok
    assert rep.width <= 4 * m.counters + 4


def test_double_fire_machine_gives_infeasible_network():
    m = NnccmMachine(1, 0, ((1, 0, 1, 0),))
    assert oracle_aonf(nnccm_to_aonf(m).instance, method="ilp") is None


def test_flow_from_run_without_tests():
    m = NnccmMachine(2, 2)
    net = nnccm_to_aonf(m)
    f = witness_flow_from_run(m, [], net)
    assert check_flow(net.instance.network, f, net.instance.value).ok


def test_single_fire_routes_one_unit_through_the_check():
    m = NnccmMachine(2, 1, ((1, 0, 2, 0),))
    net = nnccm_to_aonf(m)
    f = witness_flow_from_run(m, [(1, 0)], net)
    assert check_flow(net.instance.network, f, net.instance.value).ok
    through = {key: sum(f[a] for a in net.arcs_of[("chk", 1, key)]) for key in range(5)}
    # counter 2 still equals 0, so only the second half fires
    assert through == {0: 1, 1: 0, 2: 1, 3: 0, 4: 1}


def test_rejecting_run_is_refused():
    m = NnccmMachine(2, 1, ((1, 0, 2, 0),))
    with pytest.raises(RunRejected):
        witness_flow_from_run(m, [(0, 0)])


def test_small_machines_accept_iff_flow_exists():
    for tests in itertools.product([(1, 0, 2, 0), (1, 1, 2, 0), (1, 1, 2, 1), (2, 0, 2, 0)], repeat=2):
        m = NnccmMachine(2, 1, tests)
        run = oracle_nnccm(m)
        net = nnccm_to_aonf(m)
        assert (run is not None) == (oracle_aonf(net.instance, method="ilp") is not None)
        if run is not None:
            assert check_flow(net.instance.network, witness_flow_from_run(m, run, net), net.instance.value).ok


def test_packing_orientation_shape():
    po = binpacking_to_too([1, 2, 3], 3, 2)
    G = po.instance.graph
    assert len(G.vertices) == 5 and len(G.edges) == 6
    assert [po.instance.targets[f"w{i}"] for i in (1, 2, 3)] == [1, 2, 3]
    assert [po.instance.targets[f"v{j}"] for j in (1, 2)] == [3, 3]
    assert po.vertex_cover == {"v1", "v2"}


def test_single_bin_packing_orientation():
    po = binpacking_to_too([2, 1, 4], 7, 1)
    o = oracle_oro(po.instance)
    assert o is not None
    assert weighted_outdegrees(po.instance.graph, o) == po.instance.targets


def test_unpackable_items_give_a_no_instance():
    assert oracle_binpacking([2, 2, 2], 3, 2) is None
    assert oracle_oro(binpacking_to_too([2, 2, 2], 3, 2).instance) is None
    assert oracle_aonf(binpacking_to_aonf([2, 2, 2], 3, 2)) is None


def test_packable_items():
    groups = oracle_binpacking([1, 2, 3], 3, 2)
    assert sorted(sorted([1, 2, 3][i] for i in g) for g in groups) == [[1, 2], [3]]
    assert oracle_oro(binpacking_to_too([1, 2, 3], 3, 2).instance) is not None
    assert oracle_binpacking([4], 4, 1) is not None


def test_packing_network_shape():
    inst = binpacking_to_aonf([1, 2, 3], 3, 2)
    N = inst.network
    assert len(N.vertices) == 7 and len(N.arcs) == 3 + 6 + 2
    assert inst.value == 6
    assert oracle_aonf(inst) is not None
    assert oracle_aonf(binpacking_to_aonf([3, 1, 1], 5, 1)) is not None


def test_item_sum_must_match():
    with pytest.raises(ValueError):
        binpacking_to_too([1, 1], 3, 1)
    with pytest.raises(ValueError):
        binpacking_to_aonf([1, 1], 3, 1)
    with pytest.raises(ValueError):
        oracle_binpacking([1, 1], 3, 1)
