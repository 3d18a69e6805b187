"""Generators for hard instance families.

* Checking counter machines become all-or-nothing flow networks with a
  path decomposition of width linear in the number of counters.
* Unary bin packing becomes target outdegree orientation on K_{k,n} and
  all-or-nothing flow on a three-layer network.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import Arc, Edge, FlowNetwork, WeightedGraph
from .problems import AonfInstance, TooInstance
from .trees import PathDecomposition


@dataclass(frozen=True)
class NnccmMachine:
    """Non-deterministic non-decreasing checking counter machine.

    ``tests`` holds 4-tuples ``(i, a, j, b)``: the machine rejects when
    counter i equals a and counter j equals b at that check.
    """

    counters: int
    bound: int
    tests: tuple = ()

    def __post_init__(self):
        if self.counters < 1 or self.bound < 0:
            raise ValueError("need at least one counter and a non-negative bound")
        tests = tuple(tuple(int(x) for x in t) for t in self.tests)
        for t in tests:
            i, a, j, b = t
            if not (1 <= i <= self.counters and 1 <= j <= self.counters):
                raise ValueError(f"test {t}: counter index out of range")
            if not (0 <= a <= self.bound and 0 <= b <= self.bound):
                raise ValueError(f"test {t}: value out of range")
        object.__setattr__(self, "tests", tests)


class RunRejected(ValueError):
    def __init__(self, test_index: int):
        super().__init__(f"run rejected at test {test_index}")
        self.test_index = test_index


def check_run(m: NnccmMachine, run: Sequence) -> list:
    """Validate shape and monotonicity of a run; returns it as a list of tuples."""
    run = [tuple(v) for v in run]
    if len(run) != len(m.tests):
        raise ValueError(f"run has {len(run)} steps for {len(m.tests)} tests")
    prev = (0,) * m.counters
    for t, vec in enumerate(run, 1):
        if len(vec) != m.counters:
            raise ValueError(f"step {t}: expected {m.counters} counter values")
        if any(not 0 <= x <= m.bound for x in vec):
            raise ValueError(f"step {t}: counter value outside [0, {m.bound}]")
        if any(x < p for x, p in zip(vec, prev)):
            raise ValueError(f"step {t}: a counter decreased")
        prev = vec
    return run


def simulate_nnccm(m: NnccmMachine, run: Sequence) -> int | None:
    """Replay a run; None means accept, otherwise the 1-based rejecting test."""
    for t, (vec, (i, a, j, b)) in enumerate(zip(check_run(m, run), m.tests), 1):
        if vec[i - 1] == a and vec[j - 1] == b:
            return t
    return None


def counter_network_length(m: NnccmMachine) -> int:
    """Base capacity L = 4knB, with n and B floored at 1 so that L stays positive."""
    return 4 * m.counters * max(len(m.tests), 1) * max(m.bound, 1)


@dataclass
class CounterNetwork:
    instance: AonfInstance
    decomposition: PathDecomposition
    manifest: dict
    arcs_of: dict = field(default_factory=dict)  # logical arc -> physical arc ids


def _v(j, t):
    return f"v{j}_{t}"


def _w(j, t):
    return f"w{j}_{t}"


def _x(i, h):
    return f"x{i}_{h}"


def nnccm_to_aonf(m: NnccmMachine) -> CounterNetwork:
    """All-or-nothing flow network that has a flow of value R iff m accepts.

    Counter j at check t is encoded by the flow L + 2*value through the
    vertices v{j}_{t} and w{j}_{t}.  Parallel arcs are subdivided so that
    the result is a simple digraph.
    """
    k, B, n = m.counters, m.bound, len(m.tests)
    L = counter_network_length(m)
    R = k * (L + 2 * B)
    logical = []  # (key, tail, head, cap)
    for j in range(1, k + 1):
        logical.append((("src", j), "s", _v(j, 0), L))
        logical.append((("snk", j), _w(j, n), "t", L + 2 * B))
        for t in range(n + 1):
            for c in range(B):
                logical.append((("top", j, t, c), "s", _w(j, t), 2))
            for alpha in range(B + 1):
                logical.append((("vw", j, t, alpha), _v(j, t), _w(j, t), L + 2 * alpha))
        for t in range(n):
            i, a, jj, b = m.tests[t]
            # one unit less per half of the check that compares counter j with alpha
            for alpha in range(B + 1):
                cap = L + 2 * alpha - (i == j and a == alpha) - (jj == j and b == alpha)
                logical.append((("wv", j, t, alpha), _w(j, t), _v(j, t + 1), cap))
    for idx, (i, a, j, b) in enumerate(m.tests, 1):
        logical.append((("chk", idx, 1), _w(i, idx - 1), _x(idx, 1), 1))
        logical.append((("chk", idx, 2), _w(j, idx - 1), _x(idx, 1), 1))
        logical.append((("chk", idx, 0), _x(idx, 1), _x(idx, 2), 1))
        logical.append((("chk", idx, 3), _x(idx, 2), _v(i, idx), 1))
        logical.append((("chk", idx, 4), _x(idx, 2), _v(j, idx), 1))

    multiplicity = defaultdict(int)
    for _key, tail, head, _cap in logical:
        multiplicity[(tail, head)] += 1
    vertices = {"s", "t"}
    for j in range(1, k + 1):
        for t in range(n + 1):
            vertices |= {_v(j, t), _w(j, t)}
    for i in range(1, n + 1):
        vertices |= {_x(i, 1), _x(i, 2)}
    arcs, arcs_of, mids = [], {}, []
    for key, tail, head, cap in logical:
        if multiplicity[(tail, head)] == 1:
            arcs.append(Arc(len(arcs), tail, head, cap))
            arcs_of[key] = [arcs[-1].id]
            continue
        mid = f"_p{len(mids)}"
        mids.append((mid, tail, head))
        vertices.add(mid)
        arcs.append(Arc(len(arcs), tail, mid, cap))
        arcs.append(Arc(len(arcs), mid, head, cap))
        arcs_of[key] = [arcs[-2].id, arcs[-1].id]
    N = FlowNetwork(tuple(vertices), tuple(arcs), "s", "t")

    base = []
    if n == 0:
        base.append({"s", "t"} | {_v(j, 0) for j in range(1, k + 1)} | {_w(j, 0) for j in range(1, k + 1)})
    for i in range(n):
        bag = {"s", "t", _x(i + 1, 1), _x(i + 1, 2)}
        for j in range(1, k + 1):
            bag |= {_v(j, i), _v(j, i + 1), _w(j, i), _w(j, i + 1)}
        base.append(bag)
    extra = defaultdict(list)
    for mid, tail, head in mids:
        home = next(i for i, bag in enumerate(base) if tail in bag and head in bag)
        extra[home].append(base[home] | {mid})
    bags = []
    for i, bag in enumerate(base):
        bags.append(bag)
        bags.extend(extra[i])
    manifest = {"counters": k, "bound": B, "tests": n, "L": L, "R": R, "logical_arcs": len(logical)}
    return CounterNetwork(AonfInstance(N, R), PathDecomposition(tuple(bags)), manifest, arcs_of)


def witness_flow_from_run(m: NnccmMachine, run: Sequence, net: CounterNetwork | None = None) -> dict:
    """All-or-nothing flow of value R built from an accepting run."""
    run = check_run(m, run)
    bad = simulate_nnccm(m, run)
    if bad is not None:
        raise RunRejected(bad)
    net = net or nnccm_to_aonf(m)
    k, B, n = m.counters, m.bound, len(m.tests)
    used = set()
    for j in range(1, k + 1):
        values = [vec[j - 1] for vec in run] + [B]  # counters jump to B after the last check
        used.add(("src", j))
        used.add(("snk", j))
        entering = 0
        for t in range(n + 1):
            used.add(("vw", j, t, entering))
            for c in range(values[t] - entering):
                used.add(("top", j, t, c))
            if t < n:
                used.add(("wv", j, t, values[t]))
            entering = values[t]
    for idx, ((i, a, j, b), vec) in enumerate(zip(m.tests, run), 1):
        fired = [h for h, (c, val) in ((1, (i, a)), (2, (j, b))) if vec[c - 1] == val]
        if fired:
            h = fired[0]
            used |= {("chk", idx, h), ("chk", idx, 0), ("chk", idx, h + 2)}
    flow = {a.id: 0 for a in net.instance.network.arcs}
    caps = net.instance.network.arc_map
    for key in used:
        for aid in net.arcs_of[key]:
            flow[aid] = caps[aid].cap
    return flow


def _check_packing(A: Sequence[int], B: int, k: int) -> None:
    if k < 1 or any(a < 1 for a in A):
        raise ValueError("need k >= 1 and positive item sizes")
    if sum(A) != B * k:
        raise ValueError(f"item sum {sum(A)} differs from B*k = {B * k}")


@dataclass
class PackingOrientation:
    instance: TooInstance
    vertex_cover: frozenset


def binpacking_to_too(A: Sequence[int], B: int, k: int) -> PackingOrientation:
    """K_{k,n}: bin vertices v1..vk, item vertices w1..wn, edges at w_i weigh a_i."""
    _check_packing(A, B, k)
    bins = [f"v{j}" for j in range(1, k + 1)]
    items = [f"w{i}" for i in range(1, len(A) + 1)]
    edges = []
    for j, v in enumerate(bins):
        for i, w in enumerate(items):
            edges.append(Edge(len(edges), v, w, A[i]))
    G = WeightedGraph(tuple(bins + items), tuple(edges))
    targets = {w: A[i] for i, w in enumerate(items)}
    targets.update({v: B * k - B for v in bins})
    return PackingOrientation(TooInstance(G, targets), frozenset(bins))


def binpacking_to_aonf(A: Sequence[int], B: int, k: int) -> AonfInstance:
    """s -> item (a_i), item -> every bin (a_i), bin -> t (B), value kB."""
    _check_packing(A, B, k)
    items = [f"v{i}" for i in range(1, len(A) + 1)]
    bins = [f"w{j}" for j in range(1, k + 1)]
    arcs = []
    for i, v in enumerate(items):
        arcs.append(Arc(len(arcs), "s", v, A[i]))
    for i, v in enumerate(items):
        for w in bins:
            arcs.append(Arc(len(arcs), v, w, A[i]))
    for w in bins:
        arcs.append(Arc(len(arcs), w, "t", B))
    N = FlowNetwork(tuple(["s", "t"] + items + bins), tuple(arcs), "s", "t")
    return AonfInstance(N, k * B)
