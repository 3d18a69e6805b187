"""Reductions between the orientation, flow and domination problems.

Every reduction returns a :class:`Reduction` holding the new instance, an
optional transported tree partition, an id provenance map and a
``pull_back`` function that turns a witness of the new instance into a
witness of the original one.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from .graphs import (
    Arc,
    Edge,
    FlowNetwork,
    WeightedGraph,
    max_flow,
    flow_value,
    reverse_orientation,
)
from .problems import (
    TRIVIAL_VERTEX,
    AonfInstance,
    CdsInstance,
    CmoInstance,
    CoInstance,
    CrbdsInstance,
    DominationWitness,
    MmoInstance,
    OroInstance,
    TooInstance,
    UflbInstance,
    UflbWitness,
    trivial_no_graph,
)
from .trees import TreePartition, fresh_name


@dataclass
class Reduction:
    instance: object
    pull_back: Callable
    partition: TreePartition | None = None
    provenance: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)


def _no_witness(_w):
    raise ValueError("a trivial no-instance has no witness")


def trivial_no_oro() -> OroInstance:
    return OroInstance(trivial_no_graph(), {TRIVIAL_VERTEX: (1, 1)}, trivial_no=True)


def trivial_no_too() -> TooInstance:
    return TooInstance(trivial_no_graph(), {TRIVIAL_VERTEX: 1}, trivial_no=True)


def trivial_no_cmo() -> CmoInstance:
    return CmoInstance(trivial_no_graph(), {TRIVIAL_VERTEX: -1}, trivial_no=True)


def trivial_no_co() -> CoInstance:
    # a lone vertex cannot fail circulation, so use a single unit edge
    G = WeightedGraph.from_edges([(TRIVIAL_VERTEX, TRIVIAL_VERTEX + "1")])
    return CoInstance(G, trivial_no=True)


def _identity(w):
    return w


def lift_to_oro(inst) -> Reduction:
    """Interval form of TOO, CMO, MMO and CO instances."""
    G = inst.graph
    if getattr(inst, "trivial_no", False):
        return Reduction(trivial_no_oro(), _no_witness, notes={"trivial_no": True})
    if isinstance(inst, TooInstance):
        ivs = {v: (inst.targets[v], inst.targets[v]) for v in G.vertices}
    elif isinstance(inst, CmoInstance):
        ivs = {v: (0, inst.bounds[v]) for v in G.vertices}
    elif isinstance(inst, MmoInstance):
        return lift_to_oro(CmoInstance(G, {v: inst.r for v in G.vertices}))
    elif isinstance(inst, CoInstance):
        degs = {v: G.weighted_degree(v) for v in G.vertices}
        odd = [v for v, d in degs.items() if d % 2]
        if odd:
            return Reduction(trivial_no_oro(), _no_witness, notes={"trivial_no": True, "odd_degree": odd})
        return lift_to_oro(TooInstance(G, {v: d // 2 for v, d in degs.items()}))
    else:
        raise TypeError(f"cannot lift {type(inst).__name__} to interval form")
    return Reduction(OroInstance(G, ivs), _identity)


def too_to_cmo(inst: TooInstance) -> Reduction:
    """Equal totals turn exact targets into upper bounds; otherwise a trivial no."""
    if inst.trivial_no or inst.graph.total_weight != sum(inst.targets.values()):
        return Reduction(trivial_no_cmo(), _no_witness, notes={"trivial_no": True})
    return Reduction(CmoInstance(inst.graph, dict(inst.targets)), _identity)


def too_to_co(inst: TooInstance) -> Reduction:
    """Balance exact targets through a super source/sink pair joined by one edge."""
    G = inst.graph
    if inst.trivial_no:
        return Reduction(trivial_no_co(), _no_witness, notes={"trivial_no": True})
    demand = {v: G.weighted_degree(v) - 2 * inst.targets[v] for v in G.vertices}
    alpha = sum(abs(x) for x in demand.values()) // 2
    if alpha == 0:
        return Reduction(CoInstance(G), _identity, notes={"alpha": 0})
    taken = set(G.vertices)
    s = fresh_name("_src", taken)
    t = fresh_name("_snk", taken | {s})
    edges = list(G.edges)
    nid = G.next_edge_id()
    ts_id = nid
    edges.append(Edge(nid, t, s, alpha))
    nid += 1
    for v in G.vertices:
        if demand[v] < 0:
            edges.append(Edge(nid, s, v, -demand[v]))
            nid += 1
        elif demand[v] > 0:
            edges.append(Edge(nid, v, t, demand[v]))
            nid += 1
    H = WeightedGraph(tuple(G.vertices) + (s, t), tuple(edges))
    keep = {e.id for e in G.edges}

    def pull_back(o):
        if o[ts_id] == (s, t):
            o = reverse_orientation(o)
        return {eid: d for eid, d in o.items() if eid in keep}

    prov = {"edges": {e.id: e.id for e in G.edges}, "added": {"source": s, "sink": t, "ts_edge": ts_id}}
    return Reduction(CoInstance(H), pull_back, provenance=prov, notes={"alpha": alpha})


def aonf_to_too(inst: AonfInstance, partition: TreePartition | None = None) -> Reduction:
    """Subdivide every arc, drop directions and set targets from capacities.

    All weights and targets are already doubled, so the output is integral:
    each half edge weighs the arc capacity and a vertex's target is the
    total capacity entering it in the subdivided network, shifted by +R at
    the source and -R at the sink.
    """
    N, R = inst.network, inst.value
    taken = set(N.vertices)
    mids, edges, prov = {}, [], {}
    beta = defaultdict(int)
    for pos, a in enumerate(N.arcs):
        m = fresh_name(f"_m{a.id}", taken)
        taken.add(m)
        mids[a.id] = m
        edges.append(Edge(2 * pos, a.tail, m, a.cap))
        edges.append(Edge(2 * pos + 1, m, a.head, a.cap))
        prov[2 * pos] = a.id
        prov[2 * pos + 1] = a.id
        beta[m] += a.cap
        beta[a.head] += a.cap
    G = WeightedGraph(tuple(N.vertices) + tuple(mids.values()), tuple(edges))
    targets = {v: beta[v] for v in G.vertices}
    targets[N.source] += R
    targets[N.sink] -= R
    first_half = {a.id: 2 * pos for pos, a in enumerate(N.arcs)}

    def pull_back(o):
        return {a.id: (a.cap if o[first_half[a.id]] == (a.tail, mids[a.id]) else 0) for a in N.arcs}

    T2 = None
    if partition is not None:
        T2 = _transport_midpoints(partition, [(a.tail, a.head, mids[a.id]) for a in N.arcs])
    return Reduction(TooInstance(G, targets), pull_back, T2, {"edges": prov, "midpoints": mids})


def _transport_midpoints(T: TreePartition, triples) -> TreePartition:
    """Place each midpoint ``m`` of an edge ``u-v``.

    Same-bag midpoints join that bag; midpoints of cross edges go into a new
    node inserted on the tree arc between the two bags.
    """
    where = T.bag_of
    bags = {n: set(b) for n, b in T.bags.items()}
    arc_mid = {}
    taken = set(bags)
    for u, v, m in triples:
        i, j = where[u], where[v]
        if i == j:
            bags[i].add(m)
            continue
        key = frozenset((i, j))
        if key not in arc_mid:
            node = fresh_name(f"_a{len(arc_mid)}", taken)
            taken.add(node)
            arc_mid[key] = node
            bags[node] = set()
        bags[arc_mid[key]].add(m)
    arcs = []
    for i, j in T.arcs:
        node = arc_mid.get(frozenset((i, j)))
        if node is None:
            arcs.append((i, j))
        else:
            arcs += [(i, node), (node, j)]
    return TreePartition(bags, tuple(arcs), T.root)


def undirected_max_flow(inst: UflbInstance) -> int:
    """Largest s-t flow ignoring lower bounds, with edges usable either way."""
    arcs = []
    for e in inst.graph.edges:
        arcs.append(Arc(2 * e.id, e.u, e.v, e.weight))
        arcs.append(Arc(2 * e.id + 1, e.v, e.u, e.weight))
    N = FlowNetwork(inst.graph.vertices, tuple(arcs), inst.source, inst.sink)
    return flow_value(N, max_flow(N))


def uflb_to_co(inst: UflbInstance, partition: TreePartition | None = None) -> Reduction:
    """Encode undirected flow with lower bounds as a circulating orientation.

    Doubled units throughout: an edge with capacity c and lower bound l
    becomes a heavy path of two weight-(c+l) edges plus c-l light paths of
    two unit edges each.  A positive value R adds an s-t path whose pieces
    weigh 2R; with a partition that path is routed one vertex per bag along
    the tree path between the bags of s and t.
    """
    G, R, s, t = inst.graph, inst.value, inst.source, inst.sink
    if inst.trivial_no:
        return Reduction(trivial_no_co(), _no_witness, notes={"trivial_no": True})
    if R > 0:
        cap = undirected_max_flow(inst)
        if R > cap:
            return Reduction(trivial_no_co(), _no_witness, notes={"trivial_no": True, "cut_capacity": cap})

    taken = set(G.vertices)
    verts = list(G.vertices)
    edges = []
    heavy, lights = {}, defaultdict(list)  # base edge -> (first half id, mid)
    placement = []  # (mid vertex, u, v, kind)

    def new_vertex(base):
        name = fresh_name(base, taken)
        taken.add(name)
        verts.append(name)
        return name

    def add_path(u, v, w, base):
        m = new_vertex(base)
        eid = len(edges)
        edges.append(Edge(eid, u, m, w))
        edges.append(Edge(eid + 1, m, v, w))
        return eid, m

    for e in G.edges:
        c, low = e.weight, inst.lower[e.id]
        heavy[e.id] = add_path(e.u, e.v, c + low, f"_h{e.id}")
        placement.append((heavy[e.id][1], e.u, e.v, "heavy"))
        for j in range(c - low):
            lights[e.id].append(add_path(e.u, e.v, 1, f"_l{e.id}_{j}"))
            placement.append((lights[e.id][-1][1], e.u, e.v, "light"))

    st_route = []
    T2 = None
    if partition is not None:
        T2, st_nodes = _transport_uflb(partition, placement, s, t, R > 0, taken)
    if R > 0:
        hops = len(st_nodes) if partition is not None else 1
        prev = s
        for h in range(hops):
            x = new_vertex(f"_st{h}")
            st_route.append(x)
            edges.append(Edge(len(edges), prev, x, 2 * R))
            prev = x
        edges.append(Edge(len(edges), prev, t, 2 * R))
        if partition is not None:
            for x, node in zip(st_route, st_nodes):
                T2.bags[node].add(x)
    st_first = None
    if R > 0:
        st_first = next(e.id for e in edges if e.u == s and e.v == st_route[0])

    H = WeightedGraph(tuple(verts), tuple(edges))
    if T2 is not None:
        T2 = TreePartition(T2.bags, T2.arcs, T2.root)

    def pull_back(o):
        if st_first is not None and o[st_first] == (s, st_route[0]):
            o = reverse_orientation(o)
        orient, flow = {}, {}
        for e in G.edges:
            hid, hm = heavy[e.id]
            forward = o[hid] == (e.u, hm)
            with_heavy = sum(1 for lid, lm in lights[e.id] if (o[lid] == (e.u, lm)) == forward)
            orient[e.id] = (e.u, e.v) if forward else (e.v, e.u)
            flow[e.id] = inst.lower[e.id] + with_heavy
        return UflbWitness(orient, flow)

    prov = {
        "heavy": {eid: hid for eid, (hid, _m) in heavy.items()},
        "light": {eid: [lid for lid, _m in ls] for eid, ls in lights.items()},
        "st_path": st_route,
    }
    return Reduction(CoInstance(H), pull_back, T2, prov)


@dataclass
class _MutablePartition:
    bags: dict
    arcs: list
    root: object


def _transport_uflb(T: TreePartition, placement, s, t, route_st: bool, taken: set):
    """Bags for the subdivided UFLB graph; returns the partition and the s-t route nodes."""
    where = T.bag_of
    bags = {n: set(b) for n, b in T.bags.items()}
    node_names = set(bags) | taken
    path = _tree_path(T, where[s], where[t]) if route_st else [where[s]]
    on_path = {frozenset(p) for p in zip(path, path[1:])}
    arc_mid = {}
    for i, j in T.arcs:
        key = frozenset((i, j))
        cross = any({where[u], where[v]} == set(key) for _m, u, v, _k in placement)
        if cross or key in on_path:
            name = fresh_name(f"_a{len(arc_mid)}", node_names)
            node_names.add(name)
            arc_mid[key] = name
            bags[name] = set()
    arcs = []
    for i, j in T.arcs:
        mid = arc_mid.get(frozenset((i, j)))
        arcs += [(i, j)] if mid is None else [(i, mid), (mid, j)]
    for m, u, v, kind in placement:
        i, j = where[u], where[v]
        if i != j:
            bags[arc_mid[frozenset((i, j))]].add(m)
        elif kind == "heavy":
            bags[i].add(m)
        else:
            leaf = fresh_name(f"_b{m}", node_names)
            node_names.add(leaf)
            bags[leaf] = {m}
            arcs.append((i, leaf))
    if len(path) == 1:
        st_nodes = [path[0]]
    else:
        st_nodes = []
        for a, b in zip(path, path[1:]):
            if st_nodes:
                st_nodes.append(a)
            st_nodes.append(arc_mid[frozenset((a, b))])
    return _MutablePartition(bags, arcs, T.root), st_nodes


def _tree_path(T: TreePartition, a, b) -> list:
    par = T.parent
    up_a, seen = [a], {a}
    while par[up_a[-1]] is not None:
        up_a.append(par[up_a[-1]])
        seen.add(up_a[-1])
    up_b = [b]
    while up_b[-1] not in seen:
        up_b.append(par[up_b[-1]])
    meet = up_b[-1]
    return up_a[: up_a.index(meet) + 1] + up_b[-2::-1]


def uflb_breadth_bound(k: int) -> int:
    """Breadth guaranteed for partitions produced by :func:`uflb_to_co`."""
    return max(4 * k, k * (k + 1) // 2 + 1)


def cds_to_crbds(inst: CdsInstance, partition: TreePartition | None = None) -> Reduction:
    """Red and blue copy per vertex; each blue copy is anchored to its red copy.

    The red copy of v has capacity c(v)+1 and sees the blue copies of v and
    its neighbours.  The anchor forces a chosen red copy to serve its own
    blue copy, so the extra slot is spent on v itself.
    """
    G = inst.graph
    red = {v: f"r{v}" for v in G.vertices}
    blue = {v: f"b{v}" for v in G.vertices}
    names = list(red.values()) + list(blue.values())
    if len(set(names)) != len(names):
        raise ValueError("vertex ids collide after adding colour prefixes")
    edges, nid = [], 0
    for v in G.vertices:
        for u in [v] + G.neighbors(v):
            edges.append(Edge(nid, red[v], blue[u]))
            nid += 1
    H = WeightedGraph(tuple(names), tuple(edges))
    out = CrbdsInstance(
        H,
        frozenset(red.values()),
        frozenset(blue.values()),
        {red[v]: inst.capacity[v] + 1 for v in G.vertices},
        inst.budget,
        {blue[v]: red[v] for v in G.vertices},
    )
    back_red = {r: v for v, r in red.items()}
    back_blue = {b: v for v, b in blue.items()}

    def pull_back(w):
        S, f = DominationWitness(*w)
        D = frozenset(back_red[r] for r in S)
        assign = {back_blue[b]: back_red[r] for b, r in f.items() if back_blue[b] not in D}
        return DominationWitness(D, assign)

    T2 = None
    if partition is not None:
        T2 = TreePartition(
            {n: {red[v] for v in bag} | {blue[v] for v in bag} for n, bag in partition.bags.items()},
            partition.arcs,
            partition.root,
        )
    prov = {"red": red, "blue": blue}
    return Reduction(out, pull_back, T2, prov)
