"""Seeded random instance generators used by tests, demos and ``selftest``."""
from __future__ import annotations

import random

from .graphs import Arc, Edge, FlowNetwork, WeightedGraph, weighted_to_multigraph
from .problems import (
    AonfInstance,
    CdsInstance,
    CmoInstance,
    CoInstance,
    CrbdsInstance,
    MmoInstance,
    OroInstance,
    TooInstance,
    UflbInstance,
)
from .trees import HarmonicMorphism, RefinementStep, refinement_vertex, replay_refinement


def random_connected_graph(rng: random.Random, n: int, extra: int = 0, max_weight: int = 1) -> WeightedGraph:
    """Random spanning tree on 0..n-1 plus up to ``extra`` more edges."""
    pairs = [(rng.randrange(v), v) for v in range(1, n)]
    rest = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pairs]
    rng.shuffle(rest)
    pairs += rest[:extra]
    edges = tuple(Edge(i, u, v, rng.randint(1, max_weight)) for i, (u, v) in enumerate(pairs))
    return WeightedGraph(tuple(range(n)), edges)


def _family_graph(rng, max_vertices, max_weight):
    n = rng.randint(1, max_vertices)
    return random_connected_graph(rng, n, rng.randint(0, n), max_weight)


def random_oro(rng, max_vertices: int = 6, max_weight: int = 4) -> OroInstance:
    G = _family_graph(rng, max_vertices, max_weight)
    ivs = {}
    for v in G.vertices:
        d = G.weighted_degree(v)
        lo = rng.randint(0, d)
        ivs[v] = (lo, rng.randint(lo, d))
    return OroInstance(G, ivs)


def random_too(rng, max_vertices: int = 6, max_weight: int = 4) -> TooInstance:
    """Targets of a random orientation, perturbed half of the time."""
    G = _family_graph(rng, max_vertices, max_weight)
    out = {v: 0 for v in G.vertices}
    for e in G.edges:
        out[rng.choice((e.u, e.v))] += e.weight
    if rng.random() < 0.5 and G.vertices:
        v = rng.choice(G.vertices)
        out[v] = rng.randint(0, G.weighted_degree(v))
    return TooInstance(G, out)


def random_cmo(rng, max_vertices: int = 6, max_weight: int = 4) -> CmoInstance:
    G = _family_graph(rng, max_vertices, max_weight)
    return CmoInstance(G, {v: rng.randint(0, G.weighted_degree(v)) for v in G.vertices})


def random_mmo(rng, max_vertices: int = 6, max_weight: int = 4) -> MmoInstance:
    G = _family_graph(rng, max_vertices, max_weight)
    top = max((G.weighted_degree(v) for v in G.vertices), default=0)
    return MmoInstance(G, rng.randint(0, top))


def random_co(rng, max_vertices: int = 6, max_weight: int = 4) -> CoInstance:
    return CoInstance(_family_graph(rng, max_vertices, max_weight))


def random_uflb(rng, max_vertices: int = 5, max_cap: int = 4) -> UflbInstance:
    n = rng.randint(2, max_vertices)
    G = random_connected_graph(rng, n, rng.randint(0, n), max_cap)
    lower = {e.id: rng.randint(0, e.weight) if rng.random() < 0.5 else 0 for e in G.edges}
    s, t = rng.sample(range(n), 2)
    return UflbInstance(G, lower, s, t, rng.randint(0, G.total_weight))


def random_aonf(rng, max_vertices: int = 5, max_arcs: int = 5, max_cap: int = 4) -> AonfInstance:
    n = rng.randint(2, max_vertices)
    m = rng.randint(n - 1, max(n - 1, max_arcs))
    arcs = []
    for v in range(1, n):  # weakly connected backbone
        u = rng.randrange(v)
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    while len(arcs) < m:
        u, v = rng.sample(range(n), 2)
        arcs.append((u, v))
    N = FlowNetwork(
        tuple(range(n)),
        tuple(Arc(i, u, v, rng.randint(1, max_cap)) for i, (u, v) in enumerate(arcs)),
        *rng.sample(range(n), 2),
    )
    return AonfInstance(N, rng.randint(0, sum(a.cap for a in N.arcs)))


def random_cds(rng, max_vertices: int = 7, max_cap: int = 3) -> CdsInstance:
    n = rng.randint(1, max_vertices)
    G = random_connected_graph(rng, n, rng.randint(0, n))
    return CdsInstance(G, {v: rng.randint(1, max_cap) for v in G.vertices}, n)


def random_crbds(rng, max_red: int = 4, max_blue: int = 4, max_cap: int = 3, density: float = 0.5) -> CrbdsInstance:
    """Random bipartite instance; the budget is the number of red vertices."""
    r, b = rng.randint(1, max_red), rng.randint(1, max_blue)
    reds, blues = [f"r{i}" for i in range(r)], [f"b{i}" for i in range(b)]
    pairs = [(x, y) for x in reds for y in blues if rng.random() < density]
    G = WeightedGraph(tuple(reds + blues), tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs)))
    return CrbdsInstance(G, frozenset(reds), frozenset(blues), {x: rng.randint(1, max_cap) for x in reds}, r)


def random_ilp(rng, max_vars: int = 6, max_bound: int = 8, max_rows: int = 4, max_coeff: int = 4):
    """Bounded model with integer data; an objective is present half of the time."""
    from .ilp import IlpModel

    m = IlpModel()
    names = [f"x{i}" for i in range(rng.randint(1, max_vars))]
    for x in names:
        lo = rng.randint(0, max_bound // 2)
        m.add_var(x, lo, rng.randint(lo, max_bound))
    for _ in range(rng.randint(0, max_rows)):
        coeffs = {x: rng.randint(-max_coeff, max_coeff) for x in rng.sample(names, rng.randint(1, len(names)))}
        m.add_constraint(coeffs, rng.choice(("<=", ">=", "==")), rng.randint(-10, 3 * max_bound))
    if rng.random() < 0.5:
        m.minimize({x: rng.randint(-max_coeff, max_coeff) for x in names})
    return m


# -- harmonic morphisms ----------------------------------------------------


def _random_tree_pairs(rng, n: int) -> list:
    return [(rng.randrange(v), v) for v in range(1, n)]


class _MorphismBuilder:
    """Tracks tree images and indices while a refinement trace is built.

    Edge ids follow the numbering of :func:`replay_refinement`, so the maps
    line up with the replayed source multigraph.
    """

    def __init__(self, G: WeightedGraph, vmap: dict, tree_arcs: dict, index: dict):
        H = weighted_to_multigraph(G)
        self.G = G
        self.vmap = dict(vmap)
        self.tree_arcs = dict(tree_arcs)
        self.arc_of = {frozenset(p): aid for aid, p in tree_arcs.items()}
        self.edges = {e.id: (e.u, e.v) for e in H.edges}
        self.index = dict(index)
        self.trace: list = []
        self.nid = H.next_edge_id()
        self.fresh = 0

    def _name(self, prefix: str) -> str:
        self.fresh += 1
        return f"{prefix}{self.fresh}"

    def _tree_arc(self, a, b):
        key = frozenset((a, b))
        if key not in self.arc_of:
            aid = self._name("n")
            self.tree_arcs[aid] = (a, b)
            self.arc_of[key] = aid
        return self.arc_of[key]

    def sprout_leaves(self, node, mult: dict) -> None:
        """A new tree node below ``node``; each vertex over ``node`` gets a leaf of index m(v)."""
        q = self._name("q")
        for v in [v for v, t in self.vmap.items() if t == node]:
            s = refinement_vertex(len(self.trace))
            self.trace.append(RefinementStep("leaf", v))
            self.vmap[s] = q
            self.edges[self.nid] = (v, s)
            self.index[self.nid] = mult[v]
            mult[s] = mult[v]
            self.nid += 1
        self._tree_arc(node, q)

    def subdivide_arc(self, aid, mult: dict) -> None:
        """Insert a tree node into arc ``aid`` and subdivide every edge over it."""
        a, b = self.tree_arcs.pop(aid)
        del self.arc_of[frozenset((a, b))]
        q = self._name("q")
        self._tree_arc(a, q)
        self._tree_arc(q, b)
        for eid, (u, v) in list(self.edges.items()):
            if {self.vmap[u], self.vmap[v]} != {a, b}:
                continue
            s = refinement_vertex(len(self.trace))
            self.trace.append(RefinementStep("subdivide", eid))
            r = self.index.pop(eid)
            del self.edges[eid]
            self.vmap[s] = q
            mult[s] = r
            self.edges[self.nid] = (u, s)
            self.edges[self.nid + 1] = (s, v)
            self.index[self.nid] = self.index[self.nid + 1] = r
            self.nid += 2

    def build(self) -> HarmonicMorphism:
        H = replay_refinement(self.G, self.trace)
        emap = {}
        for e in H.edges:
            assert (e.u, e.v) == self.edges[e.id], "edge numbering drifted from the replay"
            emap[e.id] = self.arc_of[frozenset((self.vmap[e.u], self.vmap[e.v]))]
        nodes = sorted({t for p in self.tree_arcs.values() for t in p} | set(self.vmap.values()), key=str)
        return HarmonicMorphism(H, tuple(nodes), dict(self.tree_arcs), dict(self.vmap), emap,
                                {eid: self.index[eid] for eid in emap}, tuple(self.trace))


def tree_identity_morphism(rng, max_vertices: int = 7, leaves: int = 0):
    """Degree-1 morphism of a random tree onto itself, optionally with added leaves."""
    n = rng.randint(1, max_vertices)
    G = WeightedGraph(tuple(range(n)), tuple(Edge(i, u, v) for i, (u, v) in enumerate(_random_tree_pairs(rng, n))))
    vmap = {v: f"t{v}" for v in G.vertices}
    arcs = {f"a{e.id}": (vmap[e.u], vmap[e.v]) for e in G.edges}
    b = _MorphismBuilder(G, vmap, arcs, {e.id: 1 for e in G.edges})
    mult = {v: 1 for v in G.vertices}
    for _ in range(leaves):
        b.sprout_leaves(rng.choice(sorted({vmap[v] for v in G.vertices})), mult)
    return G, b.build()


def cycle_fold_morphism(rng, max_length: int = 9):
    """Cycle folded onto a path (degree 2, or 2w for uniform weight w).

    Odd cycles get one edge subdivided first so that the fold exists.
    """
    L = rng.randint(3, max_length)
    w = 1 if L % 2 else rng.randint(1, 2)
    G = WeightedGraph(tuple(range(L)), tuple(Edge(i, i, (i + 1) % L, w) for i in range(L)))
    H0 = weighted_to_multigraph(G)
    trace = []
    if L % 2:
        trace.append(RefinementStep("subdivide", rng.randrange(L)))
    H = replay_refinement(H0, trace)
    # walk the cycle in H starting at vertex 0
    adj = {v: [] for v in H.vertices}
    for e in H.edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    order, prev = [0], None
    while len(order) < len(H.vertices):
        cur = order[-1]
        nxt = next(x for x in sorted(adj[cur], key=str) if x != prev and x not in order)
        prev = cur
        order.append(nxt)
    N = len(order)
    vmap = {v: f"p{min(i, N - i)}" for i, v in enumerate(order)}
    arcs = {f"a{j}": (f"p{j}", f"p{j + 1}") for j in range(N // 2)}
    arc_of = {frozenset(p): a for a, p in arcs.items()}
    emap = {e.id: arc_of[frozenset((vmap[e.u], vmap[e.v]))] for e in H.edges}
    nodes = tuple(f"p{j}" for j in range(N // 2 + 1))
    return G, HarmonicMorphism(H, nodes, arcs, vmap, emap, {e.id: 1 for e in H.edges}, tuple(trace))


def _composition(rng, total: int) -> list:
    parts = []
    while total:
        x = rng.randint(1, total)
        parts.append(x)
        total -= x
    return parts


def random_harmonic_morphism(rng, max_nodes: int = 4, max_degree: int = 4, max_steps: int = 2):
    """Random fibres and transport matrices between adjacent fibres.

    Every tree node carries vertices whose multiplicities sum to the degree
    d; across each tree arc a random non-negative matrix with those row and
    column sums decides the edges, each entry split over parallel copies
    with indices summing to it.  A few random refinement steps (sprouting
    leaves or subdividing a whole arc) follow.
    """
    t = rng.randint(2, max_nodes)
    d = rng.randint(1, max_degree)
    tpairs = _random_tree_pairs(rng, t)
    fibres, mult, vmap = {}, {}, {}
    for node in range(t):
        fibres[node] = []
        for m in _composition(rng, d):
            v = len(vmap)
            fibres[node].append(v)
            mult[v], vmap[v] = m, f"t{node}"
    weighted, splits = [], []
    for a, b in tpairs:
        rows = {u: mult[u] for u in fibres[a]}
        cols = {v: mult[v] for v in fibres[b]}
        entry: dict = {}
        while any(rows.values()):
            u = rng.choice([x for x, r in rows.items() if r])
            v = rng.choice([x for x, c in cols.items() if c])
            x = rng.randint(1, min(rows[u], cols[v]))
            entry[(u, v)] = entry.get((u, v), 0) + x
            rows[u] -= x
            cols[v] -= x
        for (u, v), x in entry.items():
            parts = _composition(rng, x)
            weighted.append(Edge(len(weighted), u, v, len(parts)))
            splits.append(parts)
    G = WeightedGraph(tuple(vmap), tuple(weighted))
    index, nid = {}, 0
    for parts in splits:  # copies are numbered in edge-id order
        for r in parts:
            index[nid] = r
            nid += 1
    arcs = {f"a{i}": (f"t{a}", f"t{b}") for i, (a, b) in enumerate(tpairs)}
    builder = _MorphismBuilder(G, vmap, arcs, index)
    for _ in range(rng.randint(0, max_steps)):
        if rng.random() < 0.5:
            builder.sprout_leaves(rng.choice(sorted(set(builder.vmap.values()))), mult)
        else:
            builder.subdivide_arc(rng.choice(sorted(builder.tree_arcs)), mult)
    return G, builder.build()


ORIENTATION_SAMPLERS = {
    "too": random_too,
    "cmo": random_cmo,
    "mmo": random_mmo,
    "co": random_co,
}
