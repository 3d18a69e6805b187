"""Outdegree restricted orientation over a tree partition of bounded breadth.

For every tree arc from a parent node i to a child node c the table holds
the *fingerprints* that some orientation of the edges below the arc can
realise: for each vertex of the parent bag, its outdegree counted only on
edges leading into the child's subtree.  A leaf table is found by
enumeration.  An internal table enumerates orientations of the edges at
the child bag and then asks a small ILP how many children of each class
(children with equal tables) should take which fingerprint.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import WeightedGraph, sorted_vertices
from .ilp import IlpModel, RESOURCE, ResourceLimitError, solve_ilp
from .problems import (
    AonfInstance,
    CmoInstance,
    CoInstance,
    MmoInstance,
    OroInstance,
    TooInstance,
    UflbInstance,
)
from .reductions import aonf_to_too, lift_to_oro, uflb_to_co
from .trees import SubdividedPartition, TreePartition, fresh_name, validate_tree_partition


class InvariantViolation(AssertionError):
    """An internal bound that the algorithm relies on did not hold."""


@dataclass
class PreparedOro:
    graph: WeightedGraph
    intervals: dict
    partition: TreePartition  # rooted at an added node with an empty bag
    breadth: int
    chains: dict = field(default_factory=dict)  # base edge -> subdivided path


def preprocess(inst: OroInstance, partition) -> PreparedOro:
    """Normalise the input and add an empty root bag.

    ``partition`` is a tree partition of ``inst.graph`` or a
    :class:`SubdividedPartition` of a subdivision of it; subdivision
    vertices of an edge of weight w get the interval [w, w].
    """
    G, intervals, chains = inst.graph, dict(inst.intervals), {}
    if isinstance(partition, SubdividedPartition):
        sub = partition
        weight = {e.id: e.weight for e in G.edges}
        for s, eid in sub.subdivision.items():
            intervals[s] = (weight[eid], weight[eid])
        G, partition, chains = sub.graph, sub.partition, dict(sub.chains)
    report = validate_tree_partition(G, partition)
    if not report.ok:
        raise ValueError("invalid tree partition: " + "; ".join(report.violations))
    root = fresh_name("_root", set(partition.bags))
    bags = dict(partition.bags)
    bags[root] = frozenset()
    rooted = TreePartition(bags, partition.arcs + ((root, partition.root),), root)
    return PreparedOro(G, intervals, rooted, report.breadth, chains)


@dataclass
class ArcRecord:
    """How one fingerprint of an arc table was realised."""

    local: dict  # edge id -> (tail, head) for edges at the child bag
    children: dict  # child node -> fingerprint it must provide


def _settling_order(edges: list, pos: dict, settled: set) -> list:
    """Edges regrouped so that each settled vertex sees its edges early and together."""
    todo, out = list(edges), []
    while todo:
        count: dict = {}
        for e in todo:
            for i in (pos[e.u], pos[e.v]):
                if i in settled:
                    count[i] = count.get(i, 0) + 1
        if not count:
            return out + todo
        pick = min(count, key=lambda i: (count[i], i))
        out += [e for e in todo if pick in (pos[e.u], pos[e.v])]
        todo = [e for e in todo if pick not in (pos[e.u], pos[e.v])]
    return out


class OroDP:
    """Bottom-up fingerprint tables and top-down witness reconstruction."""

    def __init__(self, prep: PreparedOro, max_breadth: int = 128, max_local_edges: int = 64,
                 node_budget: int | None = None, blueprint: str = "auto"):
        if blueprint not in ("auto", "ilp", "sumset"):
            raise ValueError(f"unknown blueprint method {blueprint!r}")
        self.blueprint = blueprint
        self.routes_used = {"ilp": 0, "sumset": 0}
        if prep.breadth > max_breadth:
            raise ResourceLimitError(f"breadth {prep.breadth} exceeds the limit {max_breadth}")
        self.prep = prep
        self.k = prep.breadth
        self.max_local_edges = max_local_edges
        self.node_budget = node_budget
        self.T = prep.partition
        self.tables: dict = {}  # child node -> frozenset of fingerprints
        self.records: dict = {}  # child node -> fingerprint -> ArcRecord
        self.classes_seen = 0
        where = self.T.bag_of
        self.local_edges: dict = {n: [] for n in self.T.bags}
        for e in prep.graph.edges:
            a, b = where[e.u], where[e.v]
            if a == b:
                self.local_edges[a].append(e)
            elif self.T.parent.get(a) == b:
                self.local_edges[a].append(e)
            else:
                self.local_edges[b].append(e)

    def bag(self, n) -> list:
        return sorted_vertices(self.T.bags[n])

    def _local_profiles(self, node, slack: dict, seeds=None) -> dict:
        """Reachable (fingerprint, alpha) pairs over the local edges of ``node``.

        Edges are decided one at a time; partial outdegree vectors that
        already break an interval bound are dropped.  ``slack[v]`` is the
        most a vertex of the child bag can still gain from deeper edges.
        A child-bag vertex with no slack is settled by its last local edge,
        so once that edge is decided its entry collapses to its lower bound.
        Each surviving pair maps to the first orientation found for it.

        With ``seeds`` (child-sum vectors over the child bag) the edges start
        from those sums instead of zero, every child-bag vertex is settled,
        and each pair maps to ``(orientation, seed)``.
        """
        edges = self.local_edges[node]
        if len(edges) > self.max_local_edges:
            raise ResourceLimitError(f"{len(edges)} local edges at node {node!r} exceed the limit")
        iv = self.prep.intervals
        upper_bag = self.bag(self.T.parent[node])
        own = self.bag(node)
        order = upper_bag + own
        k = len(upper_bag)
        pos = {v: i for i, v in enumerate(order)}
        hi = [iv[v][1] for v in order]
        lo_gap = [0] * k + [iv[v][0] - slack[v] for v in own]
        settled = {i for i in range(k, len(order)) if seeds is not None or slack[order[i]] == 0}
        edges = _settling_order(edges, pos, settled)
        remaining = [0] * len(order)
        last = {}
        for idx, e in enumerate(edges):
            for i in (pos[e.u], pos[e.v]):
                remaining[i] += e.weight
                last[i] = idx
        layers = []
        origin = {}
        if seeds is None:
            states = {(0,) * len(order): None}
        else:
            states = {}
            for seed in seeds:
                new = [0] * k + list(seed)
                ok = True
                for i in range(k, len(order)):
                    if new[i] > hi[i] or new[i] + remaining[i] < lo_gap[i]:
                        ok = False
                        break
                    if i not in last:
                        new[i] = lo_gap[i]
                key = tuple(new)
                if ok and key not in states:
                    states[key] = None
                    origin[key] = seed
        for idx, e in enumerate(edges):
            iu, iw = pos[e.u], pos[e.v]
            remaining[iu] -= e.weight
            remaining[iw] -= e.weight
            done = [i for i in (iu, iw) if i in settled and last[i] == idx]
            nxt = {}
            for st in states:
                for bit, (t, h) in enumerate(((iu, iw), (iw, iu))):
                    new = list(st)
                    new[t] += e.weight
                    if new[t] > hi[t]:
                        continue
                    if new[h] + remaining[h] < lo_gap[h]:
                        continue
                    if any(new[i] < lo_gap[i] for i in done):
                        continue
                    for i in done:
                        new[i] = lo_gap[i]
                    key = tuple(new)
                    if key not in nxt:
                        nxt[key] = (st, bit)
            layers.append(nxt)
            states = nxt
        out = {}
        for st in states:
            fp, alpha = st[:k], st[k:]
            if any(x > self.k for x in fp):
                raise InvariantViolation(f"fingerprint {fp} exceeds breadth {self.k}")
            rho, cur = {}, st
            for e, layer in zip(reversed(edges), reversed(layers)):
                cur, bit = layer[cur]
                rho[e.id] = (e.u, e.v) if bit == 0 else (e.v, e.u)
            out[(fp, alpha)] = rho if seeds is None else (rho, origin[cur])
        return out

    def leaf_arc_table(self, node) -> frozenset:
        iv = self.prep.intervals
        own = self.bag(node)
        table, records = set(), {}
        for (fp, alpha), rho in self._local_profiles(node, {v: 0 for v in own}).items():
            if fp not in table and all(iv[v][0] <= a for v, a in zip(own, alpha)):
                table.add(fp)
                records[fp] = ArcRecord(rho, {})
        self.records[node] = records
        return frozenset(table)

    def child_classes(self, node) -> list:
        """Children grouped by equal tables, in order of first appearance."""
        groups: dict = {}
        for c in self.T.children[node]:
            groups.setdefault(self.tables[c], []).append(c)
        return list(groups.items())

    def _blueprint(self, node, classes, alpha):
        """Counts per (class, fingerprint) meeting every interval of the bag, or None."""
        iv = self.prep.intervals
        own = self.bag(node)
        model = IlpModel()
        rows = [dict() for _ in own]
        for g, (table, members) in enumerate(classes):
            fps = sorted(table)
            for f in fps:
                model.add_var((g, f), 0, len(members))
                for idx, x in enumerate(f):
                    if x:
                        rows[idx][(g, f)] = x
            model.add_constraint({(g, f): 1 for f in fps}, "==", len(members))
        for idx, v in enumerate(own):
            lo, hi = iv[v]
            model.add_constraint(rows[idx], ">=", lo - alpha[idx])
            model.add_constraint(rows[idx], "<=", hi - alpha[idx])
        res = solve_ilp(model, self.node_budget)
        if res.status == RESOURCE:
            raise ResourceLimitError("ILP node budget exhausted")
        return res.assignment if res.feasible else None

    def _child_sums(self, node, classes) -> tuple:
        """Every child-sum vector over the bag that stays below the upper bounds.

        Children are added one at a time; each reachable sum keeps a back
        pointer to the sum and fingerprint it came from.
        """
        iv = self.prep.intervals
        hi = [iv[v][1] for v in self.bag(node)]
        children = [c for _tab, members in classes for c in members]
        layers = []
        states = {(0,) * len(hi): None}
        for c in children:
            fps = sorted(self.tables[c])
            nxt = {}
            for st in states:
                for f in fps:
                    new = tuple(a + b for a, b in zip(st, f))
                    if new not in nxt and all(x <= h for x, h in zip(new, hi)):
                        nxt[new] = (st, f)
            layers.append(nxt)
            states = nxt
        return children, layers, list(states)

    @staticmethod
    def _trace_sums(children, layers, st) -> dict:
        assign = {}
        for c, layer in zip(reversed(children), reversed(layers)):
            st, f = layer[st]
            assign[c] = f
        return assign

    def internal_arc_table(self, node) -> frozenset:
        classes = self.child_classes(node)
        self.classes_seen = max(self.classes_seen, len(classes))
        self.records[node] = {}
        if any(not table for table, _ in classes):
            return frozenset()
        own = self.bag(node)
        slack = {v: sum(max(f[i] for f in tab) * len(members) for tab, members in classes)
                 for i, v in enumerate(own)}
        route = self.blueprint
        if route == "auto":
            small = sum(len(tab) for tab, _ in classes) <= 40 and len(self.local_edges[node]) <= 12
            route = "ilp" if small else "sumset"
        self.routes_used[route] += 1
        if route == "sumset":
            return self._seeded_arc_table(node, classes)
        cache: dict = {}
        table = set()
        for (fp, alpha), rho in self._local_profiles(node, slack).items():
            if fp in table:
                continue
            if alpha not in cache:
                counts = self._blueprint(node, classes, alpha)
                cache[alpha] = None if counts is None else self._spread_counts(classes, counts)
            assign = cache[alpha]
            if assign is None:
                continue
            table.add(fp)
            self.records[node][fp] = ArcRecord(rho, assign)
        return frozenset(table)

    def _seeded_arc_table(self, node, classes) -> frozenset:
        """Arc table from enumerated child sums fed straight into the local edges."""
        children, layers, finals = self._child_sums(node, classes)
        table = set()
        profiles = self._local_profiles(node, {v: 0 for v in self.bag(node)}, seeds=finals)
        for (fp, _alpha), (rho, seed) in profiles.items():
            if fp not in table:
                table.add(fp)
                self.records[node][fp] = ArcRecord(rho, self._trace_sums(children, layers, seed))
        return frozenset(table)

    @staticmethod
    def _spread_counts(classes, counts) -> dict:
        """Hand out fingerprints to the members of each class according to the counts."""
        assign = {}
        for g, (tab, members) in enumerate(classes):
            queue = list(members)
            for f in sorted(tab):
                for _ in range(counts[(g, f)]):
                    assign[queue.pop(0)] = f
        return assign

    def run(self) -> bool:
        for node in self.T.postorder:
            if node == self.T.root:
                continue
            if self.T.children[node]:
                self.tables[node] = self.internal_arc_table(node)
            else:
                self.tables[node] = self.leaf_arc_table(node)
        top = self.T.children[self.T.root][0]
        return bool(self.tables[top])

    def reconstruct(self) -> dict:
        """Orientation of the (possibly subdivided) graph from the recorded choices."""
        orientation = {}
        top = self.T.children[self.T.root][0]
        todo = [(top, ())]
        while todo:
            node, fp = todo.pop()
            rec = self.records[node][fp]
            orientation.update(rec.local)
            todo.extend(rec.children.items())
        return orientation


@dataclass
class OroResult:
    yes: bool
    orientation: dict | None = None
    dp: OroDP | None = None

    def __bool__(self):
        return self.yes


def collapse_chains(G: WeightedGraph, chains: dict, orientation: dict, sub_graph: WeightedGraph) -> dict:
    """Orientation of the base graph from one of its subdivisions."""
    first_piece = {}
    for e in sub_graph.edges:
        first_piece.setdefault(frozenset((e.u, e.v)), e.id)
    out = {}
    for e in G.edges:
        chain = chains.get(e.id, (e.u, e.v))
        eid = first_piece[frozenset(chain[:2])]
        out[e.id] = (e.u, e.v) if orientation[eid][0] == chain[0] else (e.v, e.u)
    return out


def solve_oro(inst: OroInstance, partition, **limits) -> OroResult:
    """Decide an ORO instance from a tree partition; on yes, return an orientation."""
    prep = preprocess(inst, partition)
    dp = OroDP(prep, **limits)
    if not dp.run():
        return OroResult(False, None, dp)
    o = dp.reconstruct()
    if prep.chains:
        o = collapse_chains(inst.graph, prep.chains, o, prep.graph)
    return OroResult(True, o, dp)


def single_bag_partition(G) -> TreePartition:
    return TreePartition({0: frozenset(G.vertices)}, ())


@dataclass
class FamilyResult:
    yes: bool
    witness: object = None

    def __bool__(self):
        return self.yes


def solve_family(inst, partition=None, **limits) -> FamilyResult:
    """Solve TOO, CMO, MMO, CO, UFLB or AoNF through the interval form.

    ``partition`` is a tree partition of the instance's underlying graph
    (for AoNF: of the network with arc capacities as weights); a single
    bag is used when none is given.
    """
    if isinstance(inst, (TooInstance, CmoInstance, MmoInstance, CoInstance, OroInstance)):
        if isinstance(inst, OroInstance):
            lifted = inst
        else:
            red = lift_to_oro(inst)
            if red.notes.get("trivial_no"):
                return FamilyResult(False)
            lifted = red.instance
        res = solve_oro(lifted, partition or single_bag_partition(inst.graph), **limits)
        return FamilyResult(res.yes, res.orientation)
    if isinstance(inst, UflbInstance):
        red = uflb_to_co(inst, partition or single_bag_partition(inst.graph))
    elif isinstance(inst, AonfInstance):
        red = aonf_to_too(inst, partition or single_bag_partition(inst.network))
    else:
        raise TypeError(f"unsupported problem {type(inst).__name__}")
    if red.notes.get("trivial_no"):
        return FamilyResult(False)
    lifted = lift_to_oro(red.instance)
    if lifted.notes.get("trivial_no"):
        return FamilyResult(False)
    res = solve_oro(lifted.instance, red.partition, **limits)
    if not res.yes:
        return FamilyResult(False)
    return FamilyResult(True, red.pull_back(res.orientation))
