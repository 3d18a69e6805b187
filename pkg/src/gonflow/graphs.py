"""Graphs, directed networks, orientations and flows.

Vertex ids are any hashable value; in practice ints and short strings.
Edge and arc ids are integers and stay stable across transformations so
that witnesses can be carried back through reductions.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, NamedTuple

Vertex = Hashable
Orientation = dict  # edge id -> (tail, head)
Flow = dict  # arc id -> non-negative int


def vertex_key(v: Vertex):
    """Total order over mixed int/str/tuple vertex ids."""
    if isinstance(v, bool):
        return (1, str(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    return (1, str(v))


def sorted_vertices(vs: Iterable[Vertex]) -> list:
    return sorted(vs, key=vertex_key)


class Edge(NamedTuple):
    id: int
    u: Vertex
    v: Vertex
    weight: int = 1

    def other(self, x: Vertex) -> Vertex:
        return self.v if x == self.u else self.u


class Arc(NamedTuple):
    id: int
    tail: Vertex
    head: Vertex
    cap: int
    lower: int = 0


def _check_int(x, what: str) -> None:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ValueError(f"{what} must be an integer, got {x!r}")


def _connected(vertices, pairs) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    adj = defaultdict(set)
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen = {vertices[0]}
    todo = [vertices[0]]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(vertices)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple graph with positive integer edge weights."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vs = sorted_vertices(set(self.vertices))
        if len(vs) != len(tuple(self.vertices)):
            raise ValueError("duplicate vertex ids")
        es = tuple(sorted((Edge(*e) for e in self.edges), key=lambda e: e.id))
        vset = set(vs)
        seen_ids, seen_pairs = set(), set()
        for e in es:
            _check_int(e.id, "edge id")
            _check_int(e.weight, "edge weight")
            if e.id in seen_ids:
                raise ValueError(f"duplicate edge id {e.id}")
            seen_ids.add(e.id)
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.id} uses an undeclared vertex")
            if e.u == e.v:
                raise ValueError(f"edge {e.id} is a loop")
            if e.weight < 1:
                raise ValueError(f"edge {e.id} has non-positive weight")
            pair = frozenset((e.u, e.v))
            if pair in seen_pairs:
                raise ValueError(f"edge {e.id} is parallel to another edge")
            seen_pairs.add(pair)
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "edges", es)

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable | None = None) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; ids are assigned 0, 1, ..."""
        es, vs = [], set(vertices or ())
        for i, e in enumerate(edges):
            u, v, w = (e[0], e[1], e[2] if len(e) > 2 else 1)
            es.append(Edge(i, u, v, w))
            vs.update((u, v))
        return cls(tuple(vs), tuple(es))

    @cached_property
    def edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            inc[e.v].append(e)
        return inc

    @cached_property
    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    def weighted_degree(self, v: Vertex) -> int:
        return sum(e.weight for e in self.incident[v])

    def neighbors(self, v: Vertex) -> list:
        return [e.other(v) for e in self.incident[v]]

    def weighted_pairs(self):
        for e in self.edges:
            yield e.u, e.v, e.weight

    def is_connected(self) -> bool:
        return _connected(self.vertices, ((e.u, e.v) for e in self.edges))

    def next_edge_id(self) -> int:
        return max((e.id for e in self.edges), default=-1) + 1

    def __repr__(self):
        return f"WeightedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


@dataclass(frozen=True, eq=False)
class Multigraph:
    """Multigraph with stable edge ids, optionally carrying provenance.

    ``original`` holds the vertices inherited from a base weighted graph,
    ``edge_origin`` maps edges to the base edge they descend from and
    ``subdivided`` maps subdivision vertices to their base edge.  Added
    leaves and their edges appear in none of these maps.  ``original`` is
    ``None`` when no provenance is known.
    """

    vertices: tuple
    edges: tuple
    original: frozenset | None = None
    edge_origin: Mapping = field(default_factory=dict)
    subdivided: Mapping = field(default_factory=dict)

    def __post_init__(self):
        vs = sorted_vertices(set(self.vertices))
        es = tuple(sorted((Edge(*e) for e in self.edges), key=lambda e: e.id))
        vset, ids = set(vs), set()
        for e in es:
            _check_int(e.id, "edge id")
            if e.id in ids:
                raise ValueError(f"duplicate edge id {e.id}")
            ids.add(e.id)
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.id} uses an undeclared vertex")
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "edges", es)

    @cached_property
    def edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            if e.v != e.u:
                inc[e.v].append(e)
        return inc

    def has_loops(self) -> bool:
        return any(e.u == e.v for e in self.edges)

    def weighted_pairs(self):
        for e in self.edges:
            yield e.u, e.v, 1

    def is_connected(self) -> bool:
        return _connected(self.vertices, ((e.u, e.v) for e in self.edges))

    def next_edge_id(self) -> int:
        return max((e.id for e in self.edges), default=-1) + 1


def weighted_to_multigraph(G: WeightedGraph) -> Multigraph:
    """Replace each weight-w edge by w parallel unit edges.

    New edge ids run 0, 1, ... in order of the weighted edge ids.
    """
    edges, origin, nid = [], {}, 0
    for e in G.edges:
        for _ in range(e.weight):
            edges.append(Edge(nid, e.u, e.v))
            origin[nid] = e.id
            nid += 1
    return Multigraph(G.vertices, tuple(edges), frozenset(G.vertices), origin, {})


def multigraph_to_weighted(M: Multigraph) -> WeightedGraph:
    """Merge parallel edges into one edge whose weight is the multiplicity.

    Each merged edge keeps the smallest id of its parallel class.
    """
    if M.has_loops():
        raise ValueError("multigraph has a loop; no weighted counterpart")
    groups: dict = {}
    for e in M.edges:
        key = frozenset((e.u, e.v))
        if key in groups:
            eid, u, v, w = groups[key]
            groups[key] = (eid, u, v, w + 1)
        else:
            groups[key] = (e.id, e.u, e.v, 1)
    return WeightedGraph(M.vertices, tuple(Edge(*g) for g in groups.values()))


def weighted_outdegrees(G: WeightedGraph, o: Mapping) -> dict:
    """Total weight of edges oriented out of each vertex."""
    out = {v: 0 for v in G.vertices}
    for e in G.edges:
        if e.id not in o:
            raise ValueError(f"orientation misses edge {e.id}")
        tail, head = o[e.id]
        if {tail, head} != {e.u, e.v}:
            raise ValueError(f"orientation of edge {e.id} does not match its endpoints")
        out[tail] += e.weight
    extra = set(o) - set(G.edge_map)
    if extra:
        raise ValueError(f"orientation names unknown edges {sorted(extra)}")
    return out


def reverse_orientation(o: Mapping) -> dict:
    return {eid: (h, t) for eid, (t, h) in o.items()}


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    """Directed network with integer capacities and optional lower bounds."""

    vertices: tuple
    arcs: tuple
    source: Vertex
    sink: Vertex

    def __post_init__(self):
        vs = sorted_vertices(set(self.vertices))
        arcs = tuple(sorted((Arc(*a) for a in self.arcs), key=lambda a: a.id))
        vset, ids = set(vs), set()
        for a in arcs:
            _check_int(a.id, "arc id")
            _check_int(a.cap, "capacity")
            _check_int(a.lower, "lower bound")
            if a.id in ids:
                raise ValueError(f"duplicate arc id {a.id}")
            ids.add(a.id)
            if a.tail not in vset or a.head not in vset:
                raise ValueError(f"arc {a.id} uses an undeclared vertex")
            if a.tail == a.head:
                raise ValueError(f"arc {a.id} is a loop")
            if a.cap < 1:
                raise ValueError(f"arc {a.id} has non-positive capacity")
            if not 0 <= a.lower <= a.cap:
                raise ValueError(f"arc {a.id} lower bound outside [0, cap]")
        if self.source not in vset or self.sink not in vset:
            raise ValueError("source and sink must be declared vertices")
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "arcs", arcs)

    @cached_property
    def arc_map(self) -> dict:
        return {a.id: a for a in self.arcs}

    def weighted_pairs(self):
        for a in self.arcs:
            yield a.tail, a.head, a.cap

    def is_connected(self) -> bool:
        return _connected(self.vertices, ((a.tail, a.head) for a in self.arcs))

    def next_arc_id(self) -> int:
        return max((a.id for a in self.arcs), default=-1) + 1


@dataclass
class FlowReport:
    ok: bool
    value: int
    violations: list

    def __bool__(self):
        return self.ok


def flow_value(N: FlowNetwork, f: Mapping) -> int:
    val = 0
    for a in N.arcs:
        x = f.get(a.id, 0)
        if a.tail == N.source:
            val += x
        if a.head == N.source:
            val -= x
    return val


def check_flow(N: FlowNetwork, f: Mapping, value: int | None = None) -> FlowReport:
    """Check bounds and conservation; optionally also the flow value."""
    bad = []
    missing = [a.id for a in N.arcs if a.id not in f]
    if missing:
        bad.append(f"flow undefined on arcs {missing}")
    unknown = sorted(set(f) - set(N.arc_map))
    if unknown:
        bad.append(f"flow names unknown arcs {unknown}")
    net = {v: 0 for v in N.vertices}
    for a in N.arcs:
        x = f.get(a.id, 0)
        if not isinstance(x, int) or x < 0 or x > a.cap:
            bad.append(f"arc {a.id}: flow {x} outside [0, {a.cap}]")
        elif x < a.lower:
            bad.append(f"arc {a.id}: flow {x} below lower bound {a.lower}")
        net[a.tail] -= x
        net[a.head] += x
    for v in N.vertices:
        if v not in (N.source, N.sink) and net[v] != 0:
            bad.append(f"conservation violated at {v!r} (net inflow {net[v]})")
    val = -net[N.source]
    if value is not None and val != value:
        bad.append(f"flow value {val} differs from required {value}")
    return FlowReport(not bad, val, bad)


class _Residual:
    """Residual graph for Edmonds-Karp; arcs stored in flat arrays."""

    def __init__(self):
        self.index: dict = {}
        self.adj: list = []
        self.to: list = []
        self.cap: list = []

    def node(self, v) -> int:
        if v not in self.index:
            self.index[v] = len(self.adj)
            self.adj.append([])
        return self.index[v]

    def add(self, a, b, cap: int) -> int:
        i, j = self.node(a), self.node(b)
        k = len(self.to)
        self.to += [j, i]
        self.cap += [cap, 0]
        self.adj[i].append(k)
        self.adj[j].append(k + 1)
        return k

    def flow_on(self, k: int) -> int:
        return self.cap[k ^ 1]

    def run(self, s, t, limit: int | None = None) -> int:
        s, t = self.node(s), self.node(t)
        total = 0
        while limit is None or total < limit:
            prev = [-1] * len(self.adj)
            prev[s] = -2
            q = deque([s])
            while q and prev[t] == -1:
                x = q.popleft()
                for k in self.adj[x]:
                    y = self.to[k]
                    if self.cap[k] > 0 and prev[y] == -1:
                        prev[y] = k
                        q.append(y)
            if prev[t] == -1:
                break
            push, y = None, t
            while y != s:
                k = prev[y]
                push = self.cap[k] if push is None else min(push, self.cap[k])
                y = self.to[k ^ 1]
            if limit is not None:
                push = min(push, limit - total)
            y = t
            while y != s:
                k = prev[y]
                self.cap[k] -= push
                self.cap[k ^ 1] += push
                y = self.to[k ^ 1]
            total += push
        return total


def max_flow(N: FlowNetwork) -> Flow:
    """Integral maximum s-t flow by shortest augmenting paths."""
    if any(a.lower for a in N.arcs):
        raise ValueError("max_flow does not handle lower bounds")
    r = _Residual()
    for v in N.vertices:
        r.node(v)
    handles = {a.id: r.add(a.tail, a.head, a.cap) for a in N.arcs}
    if N.source != N.sink:
        r.run(N.source, N.sink)
    return {aid: r.flow_on(k) for aid, k in handles.items()}


def feasible_assignment(items: Iterable, options: Mapping, capacity: Mapping) -> dict | None:
    """Assign every item to one of its options without exceeding capacities.

    Returns ``item -> option`` or ``None``.  Solved as a max flow.
    """
    items = list(items)
    r = _Residual()
    src, snk = ("__src__",), ("__snk__",)
    r.node(src)
    r.node(snk)
    handles = []
    for it in items:
        r.add(src, ("i", it), 1)
        for o in options.get(it, ()):
            handles.append((it, o, r.add(("i", it), ("o", o), 1)))
    for o, c in capacity.items():
        if c > 0:
            r.add(("o", o), snk, c)
    if r.run(src, snk) < len(items):
        return None
    return {it: o for it, o, k in handles if r.flow_on(k)}


def feasible_circulation(vertices: Iterable, arcs: Iterable) -> dict | None:
    """Circulation with bounds ``lo <= f <= hi`` on arcs ``(key, tail, head, lo, hi)``.

    Returns ``key -> flow`` or ``None`` when no feasible circulation exists.
    """
    arcs = list(arcs)
    r = _Residual()
    src, snk = ("__src__",), ("__snk__",)
    r.node(src)
    r.node(snk)
    for v in vertices:
        r.node(v)
    excess = defaultdict(int)
    handles = []
    for key, tail, head, lo, hi in arcs:
        if lo > hi:
            return None
        handles.append((key, lo, r.add(tail, head, hi - lo)))
        excess[head] += lo
        excess[tail] -= lo
    need = 0
    for v, x in excess.items():
        if x > 0:
            r.add(src, v, x)
            need += x
        elif x < 0:
            r.add(v, snk, -x)
    if r.run(src, snk) < need:
        return None
    return {key: lo + r.flow_on(k) for key, lo, k in handles}
