"""Property checks driven by seeded samplers."""
import random
from itertools import product

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from gonflow import formats
from gonflow.crbds import solve_crbds
from gonflow.graphs import (
    Arc,
    FlowNetwork,
    check_flow,
    max_flow,
    multigraph_to_weighted,
    weighted_outdegrees,
    weighted_to_multigraph,
)
from gonflow.oracles import oracle_crbds, oracle_oro
from gonflow.oro import solve_oro
from gonflow.problems import witness_violations
from gonflow.sampling import (
    cycle_fold_morphism,
    random_connected_graph,
    random_crbds,
    random_harmonic_morphism,
    random_oro,
    tree_identity_morphism,
)
from gonflow.trees import (
    bfs_layer_partition,
    morphism_to_tree_partition,
    random_tree_partition,
    validate_harmonic_morphism,
    validate_tree_partition,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
quick = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _graph(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    return rng, random_connected_graph(rng, n, rng.randint(0, 4), 4)


@quick
@given(seeds)
def test_multigraph_round_trip(seed):
    _, G = _graph(seed)
    M = weighted_to_multigraph(G)
    assert len(M.edges) == G.total_weight
    back = multigraph_to_weighted(M)
    assert {(frozenset((e.u, e.v)), e.weight) for e in back.edges} == {
        (frozenset((e.u, e.v)), e.weight) for e in G.edges}


@quick
@given(seeds)
def test_outdegrees_sum_to_total_weight(seed):
    rng, G = _graph(seed)
    o = {e.id: rng.choice([(e.u, e.v), (e.v, e.u)]) for e in G.edges}
    assert sum(weighted_outdegrees(G, o).values()) == G.total_weight


@quick
@given(seeds)
def test_max_flow_equals_min_cut(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = rng.sample(pairs, rng.randint(1, min(7, len(pairs))))
    N = FlowNetwork(tuple(range(n)), tuple(Arc(i, u, v, rng.randint(1, 4)) for i, (u, v) in enumerate(chosen)),
                    0, n - 1)
    rep = check_flow(N, max_flow(N))
    assert rep.ok
    best = None
    for side in product([0, 1], repeat=n - 2):
        S = {0} | {v + 1 for v, bit in enumerate(side) if bit}
        cut = sum(a.cap for a in N.arcs if a.tail in S and a.head not in S)
        best = cut if best is None else min(best, cut)
    assert rep.value == best


@quick
@given(seeds)
def test_sampled_partitions_are_valid(seed):
    rng, G = _graph(seed)
    for T in (random_tree_partition(G, rng), bfs_layer_partition(G)):
        assert validate_tree_partition(G, T).ok


@quick
@given(seeds)
def test_oro_matches_oracle_on_both_routes(seed):
    rng = random.Random(seed)
    inst = random_oro(rng, 6, 3)
    T = random_tree_partition(inst.graph, rng)
    expected = oracle_oro(inst) is not None
    for route in ("ilp", "sumset"):
        res = solve_oro(inst, T, blueprint=route)
        assert res.yes == expected
        if res.yes:
            assert witness_violations(inst, res.orientation) == []


@quick
@given(seeds)
def test_crbds_matches_oracle(seed):
    rng = random.Random(seed)
    inst = random_crbds(rng)
    want = oracle_crbds(inst)
    res = solve_crbds(inst, bfs_layer_partition(inst.graph))
    assert (want is None) == (res.status == "infeasible")
    if want is not None:
        assert res.size == want[0]


@quick
@given(seeds, st.sampled_from([tree_identity_morphism, cycle_fold_morphism, random_harmonic_morphism]))
def test_morphism_partition_breadth_within_degree(seed, make):
    G, M = make(random.Random(seed))
    degree = validate_harmonic_morphism(M).degree
    sub = morphism_to_tree_partition(G, M)
    rep = validate_tree_partition(sub.graph, sub.partition)
    assert rep.ok and rep.breadth <= degree


@quick
@given(seeds)
def test_instance_text_round_trip(seed):
    rng = random.Random(seed)
    inst = random_oro(rng)
    parsed = formats.parse_instance(formats.write_instance(inst))
    assert parsed.problem == "ORO"
    again = parsed.instance
    assert again.intervals == inst.intervals
    assert [tuple(e) for e in again.graph.edges] == [tuple(e) for e in inst.graph.edges]


@quick
@given(seeds)
def test_partition_text_round_trip(seed):
    rng, G = _graph(seed)
    T = random_tree_partition(G, rng)
    P = formats.parse_partition(formats.write_partition(T)).partition
    assert P.bags == T.bags and P.root == T.root
    assert {frozenset(a) for a in P.arcs} == {frozenset(a) for a in T.arcs}
