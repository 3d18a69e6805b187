"""Oracle-anchored acceptance corpus, shared by ``gonflow selftest`` and the test suite.

Every criterion compares a solver with an independent brute-force
reference on a seeded or exhaustive corpus.  ``scale="full"`` runs the
corpus sizes the project commits to; ``scale="quick"`` runs a small
slice of each for a fast smoke check.
"""
from __future__ import annotations

import io
import itertools
import random
import tempfile
import time
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import formats
from .crbds import solve_cds, solve_crbds
from .graphs import Edge, WeightedGraph, check_flow
from .hardness import (
    NnccmMachine,
    binpacking_to_aonf,
    binpacking_to_too,
    nnccm_to_aonf,
    witness_flow_from_run,
)
from .ilp import constraint_violations, solve_ilp
from .oracles import (
    oracle_aonf,
    oracle_binpacking,
    oracle_cds,
    oracle_crbds,
    oracle_ilp,
    oracle_nnccm,
    oracle_oro,
    oracle_uflb,
)
from .oro import solve_family, solve_oro
from .problems import (
    AonfInstance,
    CrbdsInstance,
    OroInstance,
    UflbInstance,
    cds_violations,
    crbds_violations,
    witness_violations,
)
from .reductions import aonf_to_too, cds_to_crbds, lift_to_oro, too_to_cmo, too_to_co, uflb_to_co
from .sampling import (
    ORIENTATION_SAMPLERS,
    cycle_fold_morphism,
    random_aonf,
    random_cds,
    random_harmonic_morphism,
    random_ilp,
    random_oro,
    random_uflb,
    tree_identity_morphism,
)
from .trees import (
    TreePartition,
    bfs_layer_partition,
    morphism_to_tree_partition,
    random_tree_partition,
    validate_harmonic_morphism,
    validate_path_decomposition,
    validate_tree_partition,
)


@dataclass
class CriterionResult:
    key: str
    title: str
    checked: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def line(self) -> str:
        extra = "".join(f", {k}={v}" for k, v in self.stats.items())
        status = "PASS" if self.passed else "FAIL"
        head = f"{status} {self.key} {self.title}: {self.checked} checks, {len(self.failures)} failures{extra} ({self.seconds:.1f} s)"
        if self.failures:
            head += "\n    first failure: " + self.failures[0]
        return head


def _pick(scale: str, full: int, quick: int) -> int:
    return full if scale == "full" else quick


# --------------------------------------------------------------------------
# c1: exhaustive ORO corpus


def _canonical(n: int, wedges) -> tuple:
    best = None
    for p in itertools.permutations(range(n)):
        key = tuple(sorted((min(p[u], p[v]), max(p[u], p[v]), w) for u, v, w in wedges))
        if best is None or key < best:
            best = key
    return best


def _connected_pairs(n: int, pairs) -> bool:
    adj = {i: set() for i in range(n)}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for y in adj[stack.pop()] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == n


def small_weighted_graphs(max_vertices=5, max_edges=6, weights=(1, 2, 3)) -> list:
    """All connected weighted graphs up to isomorphism."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs_all = list(itertools.combinations(range(n), 2))
        shapes = set()
        for m in range(0, min(max_edges, len(pairs_all)) + 1):
            for pairs in itertools.combinations(pairs_all, m):
                if not _connected_pairs(n, pairs):
                    continue
                key = _canonical(n, [(u, v, 1) for u, v in pairs])
                if key in shapes:
                    continue
                shapes.add(key)
                seen = set()
                for ws in itertools.product(weights, repeat=m):
                    wedges = [(u, v, w) for (u, v), w in zip(pairs, ws)]
                    c = _canonical(n, wedges)
                    if c in seen:
                        continue
                    seen.add(c)
                    out.append(WeightedGraph(tuple(range(n)), tuple(Edge(i, u, v, w) for i, (u, v, w) in enumerate(wedges))))
    return out


def _set_partitions(items: list, kmax: int):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest, kmax):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        if len(p) < kmax:
            yield p + [[first]]


def small_tree_partitions(G: WeightedGraph, max_bags: int = 3) -> list:
    """Every valid tree partition of G with at most three bags."""
    trees = {1: [()], 2: [((0, 1),)], 3: [((0, 1), (1, 2)), ((1, 0), (0, 2)), ((0, 2), (2, 1))]}
    out = []
    for blocks in _set_partitions(list(G.vertices), max_bags):
        for arcs in trees[len(blocks)]:
            T = TreePartition({i: frozenset(b) for i, b in enumerate(blocks)}, arcs)
            if validate_tree_partition(G, T).ok:
                out.append(T)
    return out


def interval_assignments(G: WeightedGraph, rng: random.Random) -> list:
    """Three interval maps per graph: exact degrees of a random orientation,
    the same with one vertex perturbed, and independent random intervals."""
    out = {v: 0 for v in G.vertices}
    for e in G.edges:
        out[rng.choice((e.u, e.v))] += e.weight
    exact = {v: (d, d) for v, d in out.items()}
    bumped = dict(exact)
    v = rng.choice(G.vertices)
    d = rng.randint(0, G.weighted_degree(v))
    bumped[v] = (d, d)
    loose = {}
    for v in G.vertices:
        lo = rng.randint(0, G.weighted_degree(v))
        loose[v] = (lo, rng.randint(lo, G.weighted_degree(v)))
    return [exact, bumped, loose]


def criterion_1(scale: str) -> CriterionResult:
    res = CriterionResult("c1", "ORO exactness on the exhaustive small-graph corpus")
    rng = random.Random(1)
    graphs = small_weighted_graphs()
    if scale != "full":
        graphs = random.Random(0).sample(graphs, 60)
    partitions: dict = {}
    yes = 0
    for G in graphs:
        shape = (len(G.vertices), tuple((e.u, e.v) for e in G.edges))
        if shape not in partitions:
            partitions[shape] = small_tree_partitions(G)
        for ivs in interval_assignments(G, rng):
            inst = OroInstance(G, ivs)
            expected = oracle_oro(inst) is not None
            yes += expected
            for T in partitions[shape]:
                got = solve_oro(inst, T)
                res.checked += 1
                if got.yes != expected:
                    res.fail(f"{G!r} {ivs} {dict(T.bags)}: dp={got.yes} oracle={expected}")
                elif got.yes and witness_violations(inst, got.orientation):
                    res.fail(f"{G!r} {ivs}: invalid orientation {got.orientation}")
    res.stats = {"graphs": len(graphs), "yes_instances": yes}
    return res


# --------------------------------------------------------------------------
# c2: orientation family, UFLB and AoNF


def criterion_2(scale: str) -> CriterionResult:
    res = CriterionResult("c2", "family exactness (TOO/CMO/MMO/CO, UFLB, AoNF)")
    rng = random.Random(2)
    per_family = _pick(scale, 500, 40)
    for name, sampler in ORIENTATION_SAMPLERS.items():
        for _ in range(per_family):
            inst = sampler(rng, 6, 4)
            T = random_tree_partition(inst.graph, rng)
            expected = oracle_oro(inst) is not None
            got = solve_family(inst, T)
            res.checked += 1
            if got.yes != expected:
                res.fail(f"{name} {inst.graph!r}: dp={got.yes} oracle={expected}")
            elif got.yes and witness_violations(inst, got.witness):
                res.fail(f"{name}: invalid witness")
    flow_count = _pick(scale, 300, 25)
    values = 0
    for _ in range(flow_count):
        base = random_uflb(rng, 5, 4)
        T = bfs_layer_partition(base.graph, base.source)
        for R in range(base.graph.total_weight + 1):
            inst = UflbInstance(base.graph, base.lower, base.source, base.sink, R)
            expected = oracle_uflb(inst) is not None
            got = solve_family(inst, T)
            res.checked += 1
            values += 1
            if got.yes != expected:
                res.fail(f"UFLB {inst.graph!r} lower={inst.lower} R={R}: dp={got.yes} oracle={expected}")
            elif got.yes and witness_violations(inst, got.witness):
                res.fail(f"UFLB R={R}: invalid witness")
    for _ in range(flow_count):
        base = random_aonf(rng, 5, 5, 4)
        N = base.network
        T = bfs_layer_partition(N, N.source)
        for R in range(sum(a.cap for a in N.arcs) + 1):
            inst = AonfInstance(N, R)
            expected = oracle_aonf(inst) is not None
            got = solve_family(inst, T)
            res.checked += 1
            values += 1
            if got.yes != expected:
                res.fail(f"AoNF {N.arcs} R={R}: dp={got.yes} oracle={expected}")
            elif got.yes and witness_violations(inst, got.witness):
                res.fail(f"AoNF R={R}: invalid witness")
    res.stats = {"orientation_instances": 4 * per_family, "flow_instances": 2 * flow_count, "flow_values": values}
    return res


# --------------------------------------------------------------------------
# c3: CRBDS exhaustive corpus and random CDS


def small_crbds_instances(max_red: int = 4, max_blue: int = 4, max_cap: int = 3) -> list:
    """Bipartite instances up to isomorphism, capacities capped at the degree."""
    out = []
    for r in range(1, max_red + 1):
        perms = list(itertools.permutations(range(r)))
        for b in range(1, max_blue + 1):
            seen = set()
            # a blue vertex is its set of red neighbours; a multiset of sets is
            # already canonical under blue relabelling
            for masks in itertools.combinations_with_replacement(range(1 << r), b):
                deg = [sum(1 for m in masks if m >> i & 1) for i in range(r)]
                for caps in itertools.product(*[range(1, min(max_cap, max(d, 1)) + 1) for d in deg]):
                    key = None
                    for p in perms:
                        pm = tuple(sorted(sum(1 << p[i] for i in range(r) if m >> i & 1) for m in masks))
                        pc = [0] * r
                        for i in range(r):
                            pc[p[i]] = caps[i]
                        cand = (pm, tuple(pc))
                        if key is None or cand < key:
                            key = cand
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(_crbds_from_key(r, b, *key))
    return out


def _crbds_from_key(r: int, b: int, masks, caps) -> CrbdsInstance:
    reds = [f"r{i}" for i in range(r)]
    blues = [f"b{j}" for j in range(b)]
    edges = []
    for j, m in enumerate(masks):
        for i in range(r):
            if m >> i & 1:
                edges.append(Edge(len(edges), reds[i], blues[j]))
    G = WeightedGraph(tuple(reds + blues), tuple(edges))
    return CrbdsInstance(G, frozenset(reds), frozenset(blues), {reds[i]: caps[i] for i in range(r)}, r)


def criterion_3(scale: str) -> CriterionResult:
    res = CriterionResult("c3", "CRBDS/CDS minimum sizes; table-spread assertions armed")
    rng = random.Random(3)
    corpus = small_crbds_instances()
    if scale != "full":
        corpus = random.Random(0).sample(corpus, 150)
    partitions_tried = 0
    for inst in corpus:
        found = oracle_crbds(inst)
        expected = None if found is None else found[0]
        tries = [bfs_layer_partition(inst.graph)]
        if inst.graph.is_connected() and len(inst.graph.vertices) > 1:
            tries.append(random_tree_partition(inst.graph, rng))
        for T in tries:
            partitions_tried += 1
            got = solve_crbds(inst, T)  # spread violations raise InvariantViolation
            size = None if got.status == "infeasible" else got.size
            res.checked += 1
            if size != expected:
                res.fail(f"CRBDS {inst.graph.edges} caps={inst.capacity}: dp={size} oracle={expected}")
            elif got.witness is not None and crbds_violations(inst, got.witness, check_budget=False):
                res.fail("CRBDS: invalid witness")
    cds_count = _pick(scale, 300, 40)
    for _ in range(cds_count):
        inst = random_cds(rng, 7, 3)
        T = random_tree_partition(inst.graph, rng)
        got = solve_cds(inst, T)
        expected = oracle_cds(inst)[0]
        res.checked += 1
        if got.size != expected:
            res.fail(f"CDS {inst.graph!r} caps={inst.capacity} bags={dict(T.bags)}: dp={got.size} oracle={expected}")
        elif cds_violations(inst, got.witness, check_budget=False):
            res.fail("CDS: invalid witness")
    res.stats = {"crbds_instances": len(corpus), "crbds_runs": partitions_tried, "cds_instances": cds_count}
    return res


# --------------------------------------------------------------------------
# c4: reductions


def _orientation_answer(inst):
    if getattr(inst, "trivial_no", False):
        return None
    return oracle_oro(inst)


def _random_too(rng):
    return ORIENTATION_SAMPLERS["too"](rng, 5, 4)


REDUCTION_CASES: dict = {
    "lift_to_oro/TOO": (lambda rng: ORIENTATION_SAMPLERS["too"](rng, 6, 4), lift_to_oro, _orientation_answer, _orientation_answer),
    "lift_to_oro/CMO": (lambda rng: ORIENTATION_SAMPLERS["cmo"](rng, 6, 4), lift_to_oro, _orientation_answer, _orientation_answer),
    "lift_to_oro/MMO": (lambda rng: ORIENTATION_SAMPLERS["mmo"](rng, 6, 4), lift_to_oro, _orientation_answer, _orientation_answer),
    "lift_to_oro/CO": (lambda rng: ORIENTATION_SAMPLERS["co"](rng, 6, 4), lift_to_oro, _orientation_answer, _orientation_answer),
    "too_to_cmo": (_random_too, too_to_cmo, _orientation_answer, _orientation_answer),
    "too_to_co": (_random_too, too_to_co, _orientation_answer, _orientation_answer),
    "aonf_to_too": (lambda rng: random_aonf(rng, 5, 5, 4), aonf_to_too, oracle_aonf, _orientation_answer),
    "uflb_to_co": (lambda rng: random_uflb(rng, 4, 3), uflb_to_co, oracle_uflb, _orientation_answer),
    "cds_to_crbds": (lambda rng: random_cds(rng, 6, 3), cds_to_crbds, oracle_cds, oracle_crbds),
}


def criterion_4(scale: str) -> CriterionResult:
    res = CriterionResult("c4", "reduction soundness with witness back-translation")
    rng = random.Random(4)
    count = _pick(scale, 200, 20)
    for name, (sample, reduce, oracle_in, oracle_out) in REDUCTION_CASES.items():
        for _ in range(count):
            inst = sample(rng)
            red = reduce(inst)
            a, b = oracle_in(inst), oracle_out(red.instance)
            res.checked += 1
            if name == "cds_to_crbds":
                if a[0] != b[0]:
                    res.fail(f"{name}: sizes {a[0]} vs {b[0]}")
                    continue
                back = red.pull_back(b[1])
                bad = cds_violations(inst, back, check_budget=False)
                if bad or len(back.dominators) != a[0]:
                    res.fail(f"{name}: pulled-back witness invalid: {bad}")
                continue
            if (a is None) != (b is None):
                res.fail(f"{name}: input answer {a is not None}, output answer {b is not None}")
                continue
            if b is not None:
                bad = witness_violations(inst, red.pull_back(b))
                if bad:
                    res.fail(f"{name}: pulled-back witness invalid: {bad[:2]}")
    res.stats = {"reductions": len(REDUCTION_CASES), "per_reduction": count}
    return res


# --------------------------------------------------------------------------
# c5: morphism to tree partition


def criterion_5(scale: str) -> CriterionResult:
    res = CriterionResult("c5", "harmonic morphism to tree partition bounds")
    rng = random.Random(5)
    makers = [
        lambda: tree_identity_morphism(rng, 7, leaves=rng.randint(0, 2)),
        lambda: cycle_fold_morphism(rng, 9),
        lambda: random_harmonic_morphism(rng, 4, 4, 2),
    ]
    count = _pick(scale, 100, 30)
    worst = 0
    for i in range(count):
        G, M = makers[i % 3]()
        rep = validate_harmonic_morphism(M)
        res.checked += 1
        if not rep.ok:
            res.fail(f"generator produced an invalid morphism: {rep.violations[:2]}")
            continue
        sub = morphism_to_tree_partition(G, M)
        part = validate_tree_partition(sub.graph, sub.partition)
        nodes = len(sub.partition.bags)
        worst = max(worst, part.breadth - rep.degree)
        if not part.ok:
            res.fail(f"partition invalid: {part.violations[:2]}")
        elif part.breadth > rep.degree:
            res.fail(f"breadth {part.breadth} exceeds degree {rep.degree}")
        elif nodes > 2 * len(G.vertices):
            res.fail(f"{nodes} tree nodes exceed 2|V| = {2 * len(G.vertices)}")
    res.stats = {"max_breadth_minus_degree": worst}
    return res


# --------------------------------------------------------------------------
# c6: counter machines


def all_machines(max_counters=2, max_bound=2, max_tests=2):
    for k in range(1, max_counters + 1):
        for B in range(0, max_bound + 1):
            tuples = [(i, a, j, b) for i in range(1, k + 1) for a in range(B + 1)
                      for j in range(1, k + 1) for b in range(B + 1)]
            for n in range(0, max_tests + 1):
                for tests in itertools.product(tuples, repeat=n):
                    yield NnccmMachine(k, B, tests)


def criterion_6(scale: str) -> CriterionResult:
    res = CriterionResult("c6", "counter machine acceptance equals all-or-nothing flow")
    machines = list(all_machines())
    if scale != "full":
        machines = random.Random(6).sample(machines, 120)
    accepting = 0
    for m in machines:
        run = oracle_nnccm(m)
        net = nnccm_to_aonf(m)
        flow = oracle_aonf(net.instance, method="ilp")
        res.checked += 1
        if (run is None) != (flow is None):
            res.fail(f"{m}: machine accepts={run is not None}, flow exists={flow is not None}")
            continue
        pd = validate_path_decomposition(net.instance.network, net.decomposition)
        if not pd.ok:
            res.fail(f"{m}: path decomposition invalid: {pd.violations[:2]}")
        if run is not None:
            accepting += 1
            w = witness_flow_from_run(m, run, net)
            rep = check_flow(net.instance.network, w, net.instance.value)
            if not rep.ok:
                res.fail(f"{m}: witness flow invalid: {rep.violations[:2]}")
    res.stats = {"machines": len(machines), "accepting": accepting}
    return res


# --------------------------------------------------------------------------
# c7: bin packing


def packing_cases(max_items=6, max_size=6):
    """All multisets with every (B, k) where k divides the sum and k <= n."""
    for n in range(1, max_items + 1):
        for A in itertools.combinations_with_replacement(range(1, max_size + 1), n):
            total = sum(A)
            for k in range(1, n + 1):
                if total % k == 0:
                    yield list(A), total // k, k


def criterion_7(scale: str) -> CriterionResult:
    res = CriterionResult("c7", "bin packing three-way agreement")
    cases = list(packing_cases())
    if scale != "full":
        cases = random.Random(7).sample(cases, 150)
    yes = 0
    for A, B, k in cases:
        direct = oracle_binpacking(A, B, k) is not None
        too = oracle_oro(binpacking_to_too(A, B, k).instance) is not None
        aonf = oracle_aonf(binpacking_to_aonf(A, B, k), method="ilp") is not None
        res.checked += 1
        yes += direct
        if not direct == too == aonf:
            res.fail(f"A={A} B={B} k={k}: packing={direct} too={too} aonf={aonf}")
    res.stats = {"cases": len(cases), "packable": yes}
    return res


# --------------------------------------------------------------------------
# c8: witness round trip through the command line


def _cli(argv) -> tuple:
    from .cli import main

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def _cli_corpus(rng, count: int) -> list:
    """(problem, instance, partition) triples covering every problem type."""
    items = []
    for _ in range(count):
        o = random_oro(rng, 6, 4)
        items.append(("ORO", o, random_tree_partition(o.graph, rng)))
        for name, sampler in ORIENTATION_SAMPLERS.items():
            inst = sampler(rng, 6, 4)
            items.append((name.upper(), inst, random_tree_partition(inst.graph, rng)))
        u = random_uflb(rng, 5, 4)
        items.append(("UFLB", u, bfs_layer_partition(u.graph, u.source)))
        a = random_aonf(rng, 5, 5, 4)
        items.append(("AONF", a, bfs_layer_partition(a.network, a.network.source)))
        c = random_cds(rng, 6, 3)
        c = type(c)(c.graph, c.capacity, rng.randint(1, len(c.graph.vertices)))
        items.append(("CDS", c, random_tree_partition(c.graph, rng)))
    for inst in random.Random(rng.random()).sample(small_crbds_instances(3, 3), count):
        inst = CrbdsInstance(inst.graph, inst.red, inst.blue, inst.capacity, rng.randint(0, len(inst.red)))
        items.append(("CRBDS", inst, bfs_layer_partition(inst.graph)))
    return items


def criterion_8(scale: str) -> CriterionResult:
    res = CriterionResult("c8", "witness round trip through 'validate witness'")
    rng = random.Random(8)
    corpus = _cli_corpus(rng, _pick(scale, 40, 6))
    witnesses = 0
    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)
        for idx, (problem, inst, T) in enumerate(corpus):
            ipath, ppath = d / f"{idx}.inst", d / f"{idx}.part"
            ipath.write_text(formats.write_instance(inst))
            ppath.write_text(formats.write_partition(T))
            codes = {}
            for method in ("fpt", "oracle"):
                wpath = d / f"{idx}.{method}.wit"
                code, out, err = _cli(["solve", problem, "--input", str(ipath), "--partition", str(ppath),
                                       "--method", method, "--witness", str(wpath)])
                codes[method] = code
                res.checked += 1
                if code not in (0, 1):
                    res.fail(f"{problem} #{idx} {method}: exit {code}: {err.strip()}")
                    continue
                if code == 0:
                    if not wpath.exists():
                        res.fail(f"{problem} #{idx} {method}: yes without a witness file")
                        continue
                    witnesses += 1
                    vcode, vout, verr = _cli(["validate", "witness", "--input", str(ipath), "--witness", str(wpath)])
                    if vcode != 0:
                        res.fail(f"{problem} #{idx} {method}: witness rejected: {vout.strip() or verr.strip()}")
            if codes["fpt"] != codes["oracle"]:
                res.fail(f"{problem} #{idx}: fpt exit {codes['fpt']} vs oracle exit {codes['oracle']}")
    res.stats = {"instances": len(corpus), "witnesses_validated": witnesses}
    return res


# --------------------------------------------------------------------------
# c9: ILP solver


def criterion_9(scale: str) -> CriterionResult:
    res = CriterionResult("c9", "ILP solver against box enumeration")
    rng = random.Random(9)
    count = _pick(scale, 1000, 200)
    feasible = 0
    for i in range(count):
        model = random_ilp(rng, 6, 8)
        want_feasible, want_value = oracle_ilp(model)
        got = solve_ilp(model)
        res.checked += 1
        feasible += want_feasible
        if got.feasible != want_feasible:
            res.fail(f"model {i}: solver feasible={got.feasible}, enumeration {want_feasible}")
        elif got.feasible and constraint_violations(model, got.assignment):
            res.fail(f"model {i}: returned assignment violates constraints")
        elif model.objective is not None and got.feasible and got.value != want_value:
            res.fail(f"model {i}: optimum {got.value} vs enumeration {want_value}")
    res.stats = {"feasible_models": feasible}
    return res


CRITERIA: dict = {
    "c1": criterion_1,
    "c2": criterion_2,
    "c3": criterion_3,
    "c4": criterion_4,
    "c5": criterion_5,
    "c6": criterion_6,
    "c7": criterion_7,
    "c8": criterion_8,
    "c9": criterion_9,
}


def run_criterion(key: str, scale: str = "full") -> CriterionResult:
    fn: Callable = CRITERIA[key]
    start = time.perf_counter()
    try:
        res = fn(scale)
    except Exception as exc:  # an exception counts as a failure, never a crash of the run
        res = CriterionResult(key, fn.__name__)
        res.fail(f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - start
    return res
