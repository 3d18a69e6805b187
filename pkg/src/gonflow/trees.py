"""Tree partitions, path decompositions and harmonic morphisms to trees.

The main construction turns a harmonic morphism of degree k from a
refinement of G to a tree into a tree partition of breadth at most k of a
subdivision of G, with at most 2|V(G)| nodes.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, NamedTuple

from .graphs import (
    Edge,
    Multigraph,
    WeightedGraph,
    sorted_vertices,
    vertex_key,
    weighted_to_multigraph,
)


@dataclass(frozen=True, eq=False)
class TreePartition:
    """Bags of vertices indexed by the nodes of a tree, rooted at ``root``."""

    bags: Mapping
    arcs: tuple
    root: Hashable = None

    def __post_init__(self):
        bags = {n: frozenset(b) for n, b in self.bags.items()}
        arcs = tuple(tuple(a) for a in self.arcs)
        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "arcs", arcs)
        if self.root is None and bags:
            object.__setattr__(self, "root", min(bags, key=vertex_key))

    @cached_property
    def nodes(self) -> list:
        return sorted_vertices(self.bags)

    @cached_property
    def neighbors(self) -> dict:
        nb = {n: [] for n in self.bags}
        for i, j in self.arcs:
            nb.setdefault(i, []).append(j)
            nb.setdefault(j, []).append(i)
        return {n: sorted_vertices(v) for n, v in nb.items()}

    @cached_property
    def parent(self) -> dict:
        par = {self.root: None}
        todo = deque([self.root])
        while todo:
            x = todo.popleft()
            for y in self.neighbors.get(x, ()):
                if y not in par:
                    par[y] = x
                    todo.append(y)
        return par

    @cached_property
    def children(self) -> dict:
        ch = {n: [] for n in self.parent}
        for n, p in self.parent.items():
            if p is not None:
                ch[p].append(n)
        return {n: sorted_vertices(c) for n, c in ch.items()}

    @cached_property
    def postorder(self) -> list:
        out, stack = [], [(self.root, False)]
        while stack:
            n, done = stack.pop()
            if done:
                out.append(n)
                continue
            stack.append((n, True))
            for c in reversed(self.children[n]):
                stack.append((c, False))
        return out

    @cached_property
    def bag_of(self) -> dict:
        return {v: n for n, bag in self.bags.items() for v in bag}

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0)


class PartitionReport(NamedTuple):
    ok: bool
    breadth: int
    width: int
    violations: list

    def __bool__(self):
        return self.ok


def _tree_violations(nodes: Iterable, arcs: Iterable) -> list:
    nodes = list(nodes)
    bad = []
    nset = set(nodes)
    adj = defaultdict(set)
    count = 0
    for i, j in arcs:
        count += 1
        if i not in nset or j not in nset:
            bad.append(f"tree arc {i!r}-{j!r} uses an unknown node")
            continue
        if i == j:
            bad.append(f"tree arc {i!r}-{j!r} is a loop")
        adj[i].add(j)
        adj[j].add(i)
    if nodes:
        seen, todo = {nodes[0]}, [nodes[0]]
        while todo:
            x = todo.pop()
            for y in adj[x] - seen:
                seen.add(y)
                todo.append(y)
        if len(seen) != len(nodes):
            bad.append("tree is not connected")
    if count != max(len(nodes) - 1, 0):
        bad.append(f"tree has {count} arcs for {len(nodes)} nodes, so it is not a tree")
    return bad


def validate_tree_partition(G, T: TreePartition) -> PartitionReport:
    """Check partition, edge locality and tree shape; compute the breadth.

    ``G`` is any graph exposing ``vertices`` and ``weighted_pairs()``.
    """
    bad = _tree_violations(T.bags, T.arcs)
    where: dict = {}
    for n in T.nodes:
        for v in T.bags[n]:
            if v in where:
                bad.append(f"vertex {v!r} appears in bags {where[v]!r} and {n!r}")
            else:
                where[v] = n
    vset = set(G.vertices)
    for v in sorted_vertices(vset - set(where)):
        bad.append(f"vertex {v!r} is in no bag")
    for v in sorted_vertices(set(where) - vset):
        bad.append(f"bag vertex {v!r} is not in the graph")
    adjacent = {frozenset(a) for a in T.arcs}
    cross: dict = defaultdict(int)
    for u, v, w in G.weighted_pairs():
        if u not in where or v not in where:
            continue
        i, j = where[u], where[v]
        if i == j:
            continue
        key = frozenset((i, j))
        if key in adjacent:
            cross[key] += w
        else:
            bad.append(f"edge {u!r}-{v!r} joins non-adjacent bags {i!r} and {j!r}")
    width = T.width
    breadth = max([width, *cross.values()])
    return PartitionReport(not bad, breadth, width, bad)


@dataclass(frozen=True, eq=False)
class PathDecomposition:
    """Sequence of possibly overlapping bags."""

    bags: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def validate_path_decomposition(G, P: PathDecomposition) -> PartitionReport:
    """Coverage, edge containment and contiguity; ``breadth`` carries the width."""
    bad = []
    spans: dict = {}
    for idx, bag in enumerate(P.bags):
        for v in bag:
            spans.setdefault(v, []).append(idx)
    vset = set(G.vertices)
    for v in sorted_vertices(vset - set(spans)):
        bad.append(f"vertex {v!r} is in no bag")
    for v in sorted_vertices(set(spans) - vset):
        bad.append(f"bag vertex {v!r} is not in the graph")
    for v, idxs in spans.items():
        if idxs[-1] - idxs[0] + 1 != len(idxs):
            bad.append(f"bags containing {v!r} are not contiguous")
    for u, v, _w in G.weighted_pairs():
        if u in spans and v in spans and not set(spans[u]) & set(spans[v]):
            bad.append(f"edge {u!r}-{v!r} is in no bag")
    return PartitionReport(not bad, P.width, P.width, bad)


class RefinementStep(NamedTuple):
    op: str  # "leaf" or "subdivide"
    target: Hashable  # vertex for "leaf", edge id for "subdivide"


def refinement_vertex(step_index: int) -> str:
    """Name of the vertex created by a refinement step."""
    return f"_r{step_index}"


def replay_refinement(G, trace: Iterable) -> Multigraph:
    """Apply add-leaf / subdivide steps to G (weighted graphs become multigraphs first).

    Step ``i`` creates vertex ``_r<i>``; new edges take the next free ids.
    """
    M = weighted_to_multigraph(G) if isinstance(G, WeightedGraph) else G
    verts = list(M.vertices)
    vset = set(verts)
    edges = {e.id: e for e in M.edges}
    origin = dict(M.edge_origin)
    subdivided = dict(M.subdivided)
    nid = M.next_edge_id()
    for i, step in enumerate(trace):
        op, target = RefinementStep(*step)
        new = refinement_vertex(i)
        if new in vset:
            raise ValueError(f"refinement vertex name {new!r} already in use")
        if op == "leaf":
            if target not in vset:
                raise ValueError(f"step {i}: add-leaf at unknown vertex {target!r}")
            edges[nid] = Edge(nid, target, new)
            nid += 1
        elif op == "subdivide":
            if target not in edges:
                raise ValueError(f"step {i}: subdivide unknown edge {target!r}")
            e = edges.pop(target)
            src = origin.pop(target, None)
            edges[nid] = Edge(nid, e.u, new)
            edges[nid + 1] = Edge(nid + 1, new, e.v)
            if src is not None:
                origin[nid] = origin[nid + 1] = src
                subdivided[new] = src
            nid += 2
        else:
            raise ValueError(f"step {i}: unknown refinement operation {op!r}")
        verts.append(new)
        vset.add(new)
    return Multigraph(tuple(verts), tuple(edges.values()), M.original, origin, subdivided)


@dataclass(frozen=True, eq=False)
class HarmonicMorphism:
    """Map from a multigraph to a tree, with a positive index per edge.

    ``tree_arcs`` maps tree-arc ids to node pairs; ``emap`` sends each
    source edge to a tree-arc id.
    """

    source: Multigraph
    tree_nodes: tuple
    tree_arcs: Mapping
    vmap: Mapping
    emap: Mapping
    index: Mapping
    trace: tuple | None = None


class MorphismReport(NamedTuple):
    ok: bool
    degree: int | None
    violations: list

    def __bool__(self):
        return self.ok


def validate_harmonic_morphism(M: HarmonicMorphism) -> MorphismReport:
    """Check homomorphism, harmonicity and constant degree."""
    H = M.source
    bad = _tree_violations(M.tree_nodes, M.tree_arcs.values())
    tnodes = set(M.tree_nodes)
    if H.has_loops():
        bad.append("source multigraph has loops")
    for v in H.vertices:
        if M.vmap.get(v) not in tnodes:
            bad.append(f"vertex {v!r} is not mapped to a tree node")
    if bad:
        return MorphismReport(False, None, bad)
    arcs_at = defaultdict(list)
    for aid, (a, b) in M.tree_arcs.items():
        arcs_at[a].append(aid)
        arcs_at[b].append(aid)
    sums = defaultdict(lambda: defaultdict(int))
    arc_total = defaultdict(int)
    for e in H.edges:
        aid, r = M.emap.get(e.id), M.index.get(e.id)
        if aid not in M.tree_arcs:
            bad.append(f"edge {e.id} is not mapped to a tree arc")
            continue
        if not isinstance(r, int) or r < 1:
            bad.append(f"edge {e.id} has index {r!r}, expected a positive integer")
            continue
        if {M.vmap[e.u], M.vmap[e.v]} != set(M.tree_arcs[aid]):
            bad.append(f"edge {e.id} is not mapped onto the arc between the images of its ends")
            continue
        sums[e.u][aid] += r
        sums[e.v][aid] += r
        arc_total[aid] += r
    if bad:
        return MorphismReport(False, None, bad)
    mult = {}
    for v in H.vertices:
        around = arcs_at[M.vmap[v]]
        if not around:
            mult[v] = 1  # single-node tree: every vertex counts once
            continue
        values = {sums[v][aid] for aid in around}
        if len(values) != 1:
            detail = ", ".join(f"{aid}:{sums[v][aid]}" for aid in around)
            bad.append(f"not harmonic at {v!r}: directional indices {detail}")
            continue
        mult[v] = values.pop()
        if mult[v] < 1:
            bad.append(f"vertex {v!r} has index 0")
    if bad:
        return MorphismReport(False, None, bad)
    degrees = {arc_total[aid] for aid in M.tree_arcs}
    node_sum = defaultdict(int)
    for v in H.vertices:
        node_sum[M.vmap[v]] += mult[v]
    degrees |= {node_sum[t] for t in M.tree_nodes}
    if len(degrees) != 1:
        bad.append(f"degree is not constant over tree arcs and nodes: {sorted(degrees)}")
        return MorphismReport(False, None, bad)
    return MorphismReport(True, degrees.pop(), [])


@dataclass(frozen=True, eq=False)
class SubdividedPartition:
    """A tree partition of a subdivision of some base graph.

    ``chains`` maps each base edge id to its vertex path ``(u, s1, ..., v)``;
    ``subdivision`` maps each subdivision vertex to its base edge id and
    ``edge_origin`` maps every edge of ``graph`` to its base edge id.
    """

    graph: WeightedGraph
    partition: TreePartition
    chains: Mapping
    subdivision: Mapping = field(default_factory=dict)
    edge_origin: Mapping = field(default_factory=dict)


def subdivide_along(G: WeightedGraph, chains: Mapping, partition: TreePartition) -> SubdividedPartition:
    """Build the subdivided graph described by ``chains`` (base edge id -> path)."""
    verts = list(G.vertices)
    edges, origin, subdivision = [], {}, {}
    nid = G.next_edge_id()
    for e in G.edges:
        chain = tuple(chains.get(e.id, (e.u, e.v)))
        if len(chain) == 2:
            edges.append(e)
            origin[e.id] = e.id
            continue
        for s in chain[1:-1]:
            verts.append(s)
            subdivision[s] = e.id
        for a, b in zip(chain, chain[1:]):
            edges.append(Edge(nid, a, b, e.weight))
            origin[nid] = e.id
            nid += 1
    full = {e.id: tuple(chains.get(e.id, (e.u, e.v))) for e in G.edges}
    H = WeightedGraph(tuple(verts), tuple(edges))
    return SubdividedPartition(H, partition, full, subdivision, origin)


def fresh_name(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name = "_" + name
    return name


def _check_refinement_source(G: WeightedGraph, M: HarmonicMorphism) -> None:
    H = M.source
    if M.trace is not None:
        R = replay_refinement(G, M.trace)
        same_vertices = set(R.vertices) == set(H.vertices)
        same_edges = {e.id: frozenset((e.u, e.v)) for e in R.edges} == {
            e.id: frozenset((e.u, e.v)) for e in H.edges
        }
        if not (same_vertices and same_edges):
            raise ValueError("morphism source does not match the replayed refinement trace")
    elif H.original is None:
        raise ValueError("morphism source lacks refinement provenance")
    elif set(H.original) != set(G.vertices):
        raise ValueError("morphism source provenance does not match the graph's vertices")


def morphism_to_tree_partition(G: WeightedGraph, M: HarmonicMorphism) -> SubdividedPartition:
    """Tree partition of breadth <= deg(M) of a subdivision of G."""
    report = validate_harmonic_morphism(M)
    if not report.ok:
        raise ValueError("invalid harmonic morphism: " + "; ".join(report.violations))
    _check_refinement_source(G, M)

    tadj = defaultdict(list)
    for a, b in M.tree_arcs.values():
        tadj[a].append(b)
        tadj[b].append(a)
    troot = min(M.tree_nodes, key=vertex_key)
    tpar, depth = {troot: None}, {troot: 0}
    todo = deque([troot])
    while todo:
        x = todo.popleft()
        for y in sorted_vertices(tadj[x]):
            if y not in tpar:
                tpar[y], depth[y] = x, depth[x] + 1
                todo.append(y)

    def tree_path(a, b):
        left, right = [a], [b]
        while depth[left[-1]] > depth[right[-1]]:
            left.append(tpar[left[-1]])
        while depth[right[-1]] > depth[left[-1]]:
            right.append(tpar[right[-1]])
        while left[-1] != right[-1]:
            left.append(tpar[left[-1]])
            right.append(tpar[right[-1]])
        return left + right[-2::-1]

    bags = defaultdict(set)
    for v in G.vertices:
        bags[M.vmap[v]].add(v)
    taken = set(G.vertices)
    chains, placed = {}, {}
    for e in G.edges:
        path = tree_path(M.vmap[e.u], M.vmap[e.v])
        chain = [e.u]
        for r, t in enumerate(path[1:-1], 1):
            s = fresh_name(f"_s{e.id}_{r}", taken)
            taken.add(s)
            chain.append(s)
            bags[t].add(s)
            placed[s] = t
        chain.append(e.v)
        chains[e.id] = chain

    # drop empty bags; reconnect pieces only if G itself is disconnected
    live = [t for t in sorted_vertices(M.tree_nodes) if bags[t]]
    liveset = set(live)
    arcs = {frozenset((a, b)) for a, b in M.tree_arcs.values() if a in liveset and b in liveset}
    comp, seen = [], set()
    nb = defaultdict(set)
    for arc in arcs:
        a, b = tuple(arc)
        nb[a].add(b)
        nb[b].add(a)
    for t in live:
        if t in seen:
            continue
        comp.append(t)
        seen.add(t)
        stack = [t]
        while stack:
            x = stack.pop()
            for y in nb[x] - seen:
                seen.add(y)
                stack.append(y)
    for t in comp[1:]:
        arcs.add(frozenset((comp[0], t)))
        nb[comp[0]].add(t)
        nb[t].add(comp[0])

    originals = set(G.vertices)
    while True:
        root = min(liveset, key=vertex_key)
        par = {root: None}
        todo = deque([root])
        while todo:
            x = todo.popleft()
            for y in sorted_vertices(nb[x]):
                if y not in par:
                    par[y] = x
                    todo.append(y)
        target = None
        for t in sorted_vertices(liveset):
            if len(nb[t]) == 2 and not bags[t] & originals:
                target = t
                break
        if target is None:
            break
        t = target
        into = par[t] if par[t] is not None else sorted_vertices(nb[t])[0]
        other = next(x for x in nb[t] if x != into)
        for s in list(bags[t]):
            eid = next(i for i, ch in chains.items() if s in ch)
            chains[eid].remove(s)
            del placed[s]
        del bags[t]
        liveset.discard(t)
        for x in (into, other):
            nb[x].discard(t)
        del nb[t]
        nb[into].add(other)
        nb[other].add(into)

    final_bags = {t: frozenset(bags[t]) for t in liveset}
    final_arcs = sorted(
        {tuple(sorted_vertices(pair)) for t in liveset for pair in ((t, x) for x in nb[t])},
        key=lambda p: (vertex_key(p[0]), vertex_key(p[1])),
    )
    T = TreePartition(final_bags, tuple(final_arcs))
    return subdivide_along(G, chains, T)


def bfs_layer_partition(G, start=None) -> TreePartition:
    """Path-shaped partition whose bags are BFS layers.

    Layers are taken from ``start`` (default: the smallest vertex); further
    connected components follow as their own runs of layers, since
    consecutive bags need not share an edge.
    """
    vs = sorted_vertices(G.vertices)
    adj = defaultdict(set)
    for u, v, _w in G.weighted_pairs():
        adj[u].add(v)
        adj[v].add(u)
    layers: list = []
    dist: dict = {}
    starts = ([start] if start is not None else []) + vs
    for s in starts:
        if s in dist:
            continue
        base = len(layers)
        dist[s] = base
        todo = deque([s])
        while todo:
            x = todo.popleft()
            if dist[x] == len(layers):
                layers.append(set())
            layers[dist[x]].add(x)
            for y in sorted_vertices(adj[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    todo.append(y)
    return TreePartition({d: b for d, b in enumerate(layers)}, tuple((d, d + 1) for d in range(len(layers) - 1)), 0)


def random_tree_partition(G, rng) -> TreePartition:
    """Merge random adjacent blocks until the quotient graph is a tree.

    ``rng`` is a :class:`random.Random`.  Any tree partition of a connected
    graph can arise, which makes this a useful test generator.
    """
    block = {v: v for v in G.vertices}

    def find(v):
        while block[v] != v:
            block[v] = block[block[v]]
            v = block[v]
        return v

    pairs = [(u, v) for u, v, _w in G.weighted_pairs()]
    while True:
        quotient = {frozenset((find(u), find(v))) for u, v in pairs if find(u) != find(v)}
        roots = {find(v) for v in G.vertices}
        if len(quotient) == len(roots) - 1:
            break
        a, b = tuple(rng.choice(sorted(quotient, key=lambda q: sorted(map(vertex_key, q)))))
        block[find(a)] = find(b)
    members = defaultdict(set)
    for v in G.vertices:
        members[find(v)].add(v)
    names = {r: i for i, r in enumerate(sorted_vertices(members))}
    bags = {names[r]: vs for r, vs in members.items()}
    arcs = tuple(sorted(tuple(sorted(names[x] for x in q)) for q in quotient))
    return TreePartition(bags, arcs)
