"""Capacitated red-blue dominating set over a tree partition of bounded width.

Three tables are kept per node i with parent j (k is the partition width):

* ``A[i][(D, h)]``: fewest dominators in the subtree of i that serve every
  blue vertex below X_i and exactly the blue set D of X_i; ``h`` is the
  spare capacity of each red vertex of X_i, capped at k.
* ``B[i][D]``: as A, but D may also contain blue vertices of X_j served
  from X_i.
* ``C[i][(D, g)]``: every blue vertex of X_i is served, some by red
  vertices of X_j; ``g`` counts how many per red vertex of X_j and D is
  the blue set of X_j served from X_i.  Red vertices of X_j are not
  counted in the size.

Anchors (used by the dominating set front-end) are handled in a
"free-self" form: a chosen anchoring red vertex covers its blue partner
at no charge and offers one unit less capacity to everybody else.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

from .graphs import Edge, WeightedGraph, feasible_assignment, sorted_vertices
from .ilp import IlpModel, RESOURCE, ResourceLimitError, solve_ilp
from .oro import InvariantViolation
from .problems import CdsInstance, CrbdsInstance, DominationWitness, crbds_violations
from .reductions import cds_to_crbds
from .trees import SubdividedPartition, TreePartition, fresh_name, validate_tree_partition

FREE = "free"  # in-bag option: covered by the chosen anchor at no charge


def feasibility_precheck(inst: CrbdsInstance) -> bool:
    """Can every blue vertex be served when all red vertices are chosen?"""
    caps = dict(inst.capacity)
    for _b, r in inst.anchors.items():
        caps[r] -= 1
    rest = [b for b in inst.blue if b not in inst.anchors]
    options = {b: list(inst.graph.neighbors(b)) for b in rest}
    return feasible_assignment(rest, options, caps) is not None


@dataclass
class Gadgetized:
    instance: CrbdsInstance
    partition: TreePartition
    offset: int  # number of gadgets; each adds exactly one forced dominator
    pull_back: Callable


def gadgetize_subdivisions(inst: CrbdsInstance, sub) -> Gadgetized:
    """Replace subdivision vertices by red/blue gadgets.

    ``sub`` is a :class:`SubdividedPartition` of a subdivision of
    ``inst.graph`` or a plain :class:`TreePartition` (returned unchanged).
    A red-blue edge v-w subdivided into v, s1, ..., sl, w becomes
    v-x1, y_i-x_i, y_i-z_i, y_i-x_{i+1} and y_l-w with x_i, z_i blue and
    y_i red of capacity 2, all three placed in the bag of s_i.
    """
    if isinstance(sub, TreePartition):
        return Gadgetized(inst, sub, 0, lambda w: w)
    if not isinstance(sub, SubdividedPartition):
        raise TypeError("expected a tree partition or a subdivided partition")
    G = inst.graph
    taken = set(G.vertices) | set(sub.graph.vertices)
    verts = list(G.vertices)
    red, blue = set(inst.red), set(inst.blue)
    caps = dict(inst.capacity)
    edges, gadgets = [], {}
    bags = {n: set(b) for n, b in sub.partition.bags.items()}
    where = sub.partition.bag_of
    anchored_pairs = {frozenset((b, r)) for b, r in inst.anchors.items()}

    def new(base):
        name = fresh_name(base, taken)
        taken.add(name)
        verts.append(name)
        return name

    for e in G.edges:
        chain = list(sub.chains.get(e.id, (e.u, e.v)))
        if len(chain) == 2:
            edges.append(Edge(len(edges), e.u, e.v))
            continue
        if frozenset((e.u, e.v)) in anchored_pairs:
            raise ValueError(f"anchored edge {e.id} must not be subdivided")
        if chain[0] not in red:
            chain.reverse()
        v, w, mids = chain[0], chain[-1], chain[1:-1]
        prev = v
        ys = []
        for s in mids:
            x, y, z = new(f"_gx{s}"), new(f"_gy{s}"), new(f"_gz{s}")
            blue |= {x, z}
            red.add(y)
            caps[y] = 2
            edges += [Edge(len(edges), prev, x), Edge(len(edges) + 1, y, x), Edge(len(edges) + 2, y, z)]
            node = where[s]
            bags[node] = (bags[node] - {s}) | {x, y, z}
            prev = y
            ys.append(y)
        edges.append(Edge(len(edges), prev, w))
        gadgets[e.id] = (v, w, ys[-1])
    H = WeightedGraph(tuple(verts), tuple(edges))
    out = CrbdsInstance(H, frozenset(red), frozenset(blue), caps, inst.budget + len(sub.subdivision), inst.anchors)
    T = TreePartition(bags, sub.partition.arcs, sub.partition.root)
    originals = set(G.vertices)

    def pull_back(w: DominationWitness) -> DominationWitness:
        S, f = w
        assign = {b: r for b, r in f.items() if b in originals and r in originals}
        for v, wv, last in gadgets.values():
            if f.get(wv) == last:
                assign[wv] = v
        return DominationWitness(frozenset(S) & originals, assign)

    return Gadgetized(out, T, len(sub.subdivision), pull_back)


@dataclass
class CrbdsResult:
    status: str  # "size", "infeasible" or "over-budget"
    size: int | None = None
    witness: DominationWitness | None = None
    width: int | None = None
    breadth: int | None = None
    dp: "CrbdsDP | None" = None

    def __bool__(self):
        return self.status == "size"


def _subsets(items: list):
    """All subsets in bitmask order over ``items``."""
    for mask in range(1 << len(items)):
        yield [x for i, x in enumerate(items) if mask >> i & 1]


class CrbdsDP:
    """Bottom-up A/B/C tables with back-pointers for the witness."""

    def __init__(self, inst: CrbdsInstance, T: TreePartition, max_width: int = 12,
                 blueprint: str = "auto", node_budget: int | None = None):
        if blueprint not in ("auto", "ilp", "sumset"):
            raise ValueError(f"unknown blueprint method {blueprint!r}")
        report = validate_tree_partition(inst.graph, T)
        if not report.ok:
            raise ValueError("invalid tree partition: " + "; ".join(report.violations))
        if report.width > max_width:
            raise ResourceLimitError(f"width {report.width} exceeds the limit {max_width}")
        self.inst, self.T = inst, T
        self.k = max(report.width, 1)
        self.breadth = report.breadth
        self.blueprint = blueprint
        self.node_budget = node_budget
        self.routes_used = {"ilp": 0, "sumset": 0}
        self.anchor_of = dict(inst.anchors)  # blue -> red
        self.partner = {r: b for b, r in inst.anchors.items()}  # red -> blue
        for b, r in self.anchor_of.items():
            if T.bag_of[b] != T.bag_of[r]:
                raise ValueError(f"anchored pair {b!r}, {r!r} must share a bag")
        self.cap = {r: c - (r in self.partner) for r, c in inst.capacity.items()}
        self.adj = {v: set(inst.graph.neighbors(v)) for v in inst.graph.vertices}
        self.reds = {n: sorted_vertices(v for v in b if v in inst.red) for n, b in T.bags.items()}
        self.blues = {n: sorted_vertices(v for v in b if v in inst.blue) for n, b in T.bags.items()}
        self.A: dict = {}
        self.B: dict = {}
        self.C: dict = {}

    # -- partial solutions -------------------------------------------------
    def _in_bag_options(self, node, Q: list) -> list:
        """Per blue vertex of the bag: None (left to children or undominated), FREE, or a red of Q."""
        qset = set(Q)
        opts = []
        for b in self.blues[node]:
            anchor = self.anchor_of.get(b)
            if anchor in qset:
                # the partner may still be left out of D so that tables stay monotone
                opts.append([None, FREE])
            else:
                opts.append([None] + [r for r in Q if r in self.adj[b]])
        return opts

    def _settle(self, node, Q, choice):
        """Residual capacities after in-bag service, or None if one goes negative."""
        left = {r: self.cap[r] for r in Q}
        for b, r in zip(self.blues[node], choice):
            if r is not None and r != FREE:
                left[r] -= 1
                if left[r] < 0:
                    return None
        return left

    def _h(self, node, left: dict, used) -> tuple:
        return tuple(min(self.k, left[r] - u) if r in left else 0 for r, u in zip(self.reds[node], used))

    def _offer(self, table, key, size, back):
        cur = table.get(key)
        if cur is None or size < cur[0]:
            table[key] = (size, back)

    def leaf_table(self, node) -> dict:
        """Exhaustive search over dominators, served blue vertices and their servers."""
        table: dict = {}
        zero = (0,) * len(self.reds[node])
        for Q in _subsets(self.reds[node]):
            for choice in product(*self._in_bag_options(node, Q)):
                left = self._settle(node, Q, choice)
                if left is None:
                    continue
                D = frozenset(b for b, r in zip(self.blues[node], choice) if r is not None)
                assign = {b: r for b, r in zip(self.blues[node], choice) if r is not None}
                self._offer(table, (D, self._h(node, left, zero)), len(Q), ("leaf", tuple(Q), assign, {}))
        return table

    def child_summary(self, node):
        """Normalised child tables, their classes and the total of the minima."""
        classes: dict = {}
        m_tot = 0
        for c in self.T.children[node]:
            table = self.C[c]
            if not table:
                raise InvariantViolation(f"child {c!r} has no extended partial solution")
            m = min(v for v, _ in table.values())
            m_tot += m
            norm = tuple(sorted(((key, v - m) for key, (v, _) in table.items()),
                                key=lambda kv: (sorted(map(str, kv[0][0])), kv[0][1])))
            if any(x > 2 * self.k for _, x in norm):
                raise InvariantViolation(f"normalised table of {c!r} exceeds 2k = {2 * self.k}")
            classes.setdefault(norm, []).append(c)
        return list(classes.items()), m_tot

    def _child_sums(self, node, classes) -> dict:
        """Cheapest choice of child characteristics per (served set, capacity used)."""
        reds = self.reds[node]
        limit = [self.cap[r] for r in reds]
        layers = []
        states = {(frozenset(), (0,) * len(reds)): 0}
        order = [(c, norm) for norm, members in classes for c in members]
        for c, norm in order:
            nxt: dict = {}
            back: dict = {}
            for (cov, used), cost in states.items():
                for (Dc, gc), extra in norm:
                    if cov & Dc:
                        continue
                    nu = tuple(a + b for a, b in zip(used, gc))
                    if any(x > lim for x, lim in zip(nu, limit)):
                        continue
                    key = (cov | Dc, nu)
                    if key not in nxt or cost + extra < nxt[key]:
                        nxt[key] = cost + extra
                        back[key] = ((cov, used), (Dc, gc))
            layers.append(back)
            states = nxt
        return {"states": states, "layers": layers, "order": [c for c, _ in order]}

    @staticmethod
    def _trace_children(sums, key) -> dict:
        chosen = {}
        for c, back in zip(reversed(sums["order"]), reversed(sums["layers"])):
            key, char = back[key]
            chosen[c] = char
        return chosen

    def _ilp_targets(self, node, classes, left: dict, rest: list):
        """Blueprint ILP for every target (served set, spare capacity); yields (D_child, h, cost, chosen)."""
        reds = self.reds[node]
        ranges = [range(min(self.k, left[r]) + 1) if r in left else range(1) for r in reds]
        for Dc in _subsets(rest):
            Dset = set(Dc)
            for h in product(*ranges):
                model = IlpModel()
                names = []
                for g, (norm, members) in enumerate(classes):
                    row = {}
                    for idx, (_char, _extra) in enumerate(norm):
                        model.add_var((g, idx), 0, len(members))
                        row[(g, idx)] = 1
                        names.append((g, idx))
                    model.add_constraint(row, "==", len(members))
                for b in rest:
                    row = {(g, idx): 1 for g, (norm, _m) in enumerate(classes)
                           for idx, ((Dch, _g), _x) in enumerate(norm) if b in Dch}
                    model.add_constraint(row, "==", 1 if b in Dset else 0)
                for pos, r in enumerate(reds):
                    row = {(g, idx): gch[pos] for g, (norm, _m) in enumerate(classes)
                           for idx, ((_D, gch), _x) in enumerate(norm) if gch[pos]}
                    spare = left.get(r, 0)
                    if h[pos] < self.k:
                        model.add_constraint(row, "==", spare - h[pos])
                    else:
                        model.add_constraint(row, "<=", spare - self.k)
                model.minimize({(g, idx): extra for g, (norm, _m) in enumerate(classes)
                                for idx, (_c, extra) in enumerate(norm) if extra})
                res = solve_ilp(model, self.node_budget)
                if res.status == RESOURCE:
                    raise ResourceLimitError("ILP node budget exhausted")
                if not res.feasible:
                    continue
                chosen = {}
                for g, (norm, members) in enumerate(classes):
                    queue = list(members)
                    for idx, (char, _x) in enumerate(norm):
                        for _ in range(res.assignment[(g, idx)]):
                            chosen[queue.pop(0)] = char
                yield frozenset(Dc), tuple(h), res.value or 0, chosen

    def combine_children(self, node) -> dict:
        classes, m_tot = self.child_summary(node)
        route = self.blueprint
        blues, reds = self.blues[node], self.reds[node]
        if route == "auto":
            variables = sum(len(norm) for norm, _ in classes)
            targets = (2 ** len(blues)) * max(1, (self.k + 1) ** len(reds))
            route = "ilp" if variables * targets <= 400 else "sumset"
        self.routes_used[route] += 1
        sums = self._child_sums(node, classes) if route == "sumset" else None
        table: dict = {}
        for Q in _subsets(reds):
            for choice in product(*self._in_bag_options(node, Q)):
                left = self._settle(node, Q, choice)
                if left is None:
                    continue
                D_in = frozenset(b for b, r in zip(blues, choice) if r is not None)
                assign = {b: r for b, r in zip(blues, choice) if r is not None}
                rest = [b for b in blues if b not in D_in]
                if route == "ilp":
                    found = self._ilp_targets(node, classes, left, rest)
                else:
                    found = self._sumset_targets(node, sums, left, rest)
                for cov, h, cost, chosen in found:
                    size = len(Q) + m_tot + cost
                    self._offer(table, (D_in | cov, h), size, ("combine", tuple(Q), assign, chosen))
        return table

    def _sumset_targets(self, node, sums, left, rest):
        reds = self.reds[node]
        spare = [left.get(r, 0) for r in reds]
        rset = set(rest)
        for (cov, used), cost in sums["states"].items():
            if not cov <= rset or any(u > s for u, s in zip(used, spare)):
                continue
            yield cov, self._h(node, left, used), cost, (sums, (cov, used))

    # -- peps and eps ------------------------------------------------------
    def a_to_b(self, node) -> dict:
        parent = self.T.parent[node]
        reds = self.reds[node]
        table: dict = {}
        for (D, h), (size, _back) in self.A[node].items():
            spare = dict(zip(reds, h))
            opts = [[None] + [r for r in reds if spare[r] > 0 and r in self.adj[b]] for b in self.blues[parent]]
            for choice in product(*opts):
                load: dict = {}
                for r in choice:
                    if r is not None:
                        load[r] = load.get(r, 0) + 1
                if any(n > spare[r] for r, n in load.items()):
                    continue
                mapping = {b: r for b, r in zip(self.blues[parent], choice) if r is not None}
                self._offer(table, D | frozenset(mapping), size, ((D, h), mapping))
        alpha = table.get(frozenset())
        if alpha is None:
            raise InvariantViolation(f"node {node!r}: no peps serving nothing")
        for D, (v, _b) in table.items():
            if not alpha[0] <= v <= alpha[0] + len(D):
                raise InvariantViolation(f"node {node!r}: B({sorted(map(str, D))}) = {v} outside "
                                         f"[{alpha[0]}, {alpha[0] + len(D)}]")
        return table

    def b_to_c(self, node) -> dict:
        parent = self.T.parent[node]
        preds = self.reds[parent]
        own = set(self.blues[node])
        table: dict = {}
        for D, (size, _back) in self.B[node].items():
            mine = D & own
            upper = D - own
            todo = [b for b in self.blues[node] if b not in mine]
            opts = [[r for r in preds if r in self.adj[b]] for b in todo]
            for choice in product(*opts):
                g = tuple(sum(1 for r in choice if r == x) for x in preds)
                self._offer(table, (upper, g), size, (D, dict(zip(todo, choice))))
        if table:
            values = [v for v, _ in table.values()]
            if max(values) - min(values) > 2 * self.k:
                raise InvariantViolation(f"node {node!r}: C spread {max(values) - min(values)} exceeds 2k")
        return table

    # -- driver ------------------------------------------------------------
    def run(self) -> int | None:
        for node in self.T.postorder:
            if self.T.children[node]:
                self.A[node] = self.combine_children(node)
            else:
                self.A[node] = self.leaf_table(node)
            if node != self.T.root:
                self.B[node] = self.a_to_b(node)
                self.C[node] = self.b_to_c(node)
        full = frozenset(self.blues[self.T.root])
        best = None
        for (D, h), (size, _b) in self.A[self.T.root].items():
            if D == full and (best is None or size < best[0]):
                best = (size, (D, h))
        if best is None:
            return None
        self.answer_key = best[1]
        return best[0]

    def reconstruct(self) -> DominationWitness:
        S, f = set(), {}
        todo = [("A", self.T.root, self.answer_key)]
        while todo:
            kind, node, key = todo.pop()
            if kind == "A":
                _size, (_tag, Q, assign, chosen) = self.A[node][key]
                S.update(Q)
                for b, r in assign.items():
                    f[b] = self.anchor_of[b] if r == FREE else r
                if isinstance(chosen, tuple):  # sumset back-pointer
                    chosen = self._trace_children(*chosen)
                todo.extend(("C", c, char) for c, char in chosen.items())
            elif kind == "C":
                _size, (bkey, mapping) = self.C[node][key]
                f.update(mapping)
                todo.append(("B", node, bkey))
            else:
                _size, (akey, mapping) = self.B[node][key]
                f.update(mapping)
                todo.append(("A", node, akey))
        for b, r in self.anchor_of.items():
            if r in S:
                f[b] = r
        return DominationWitness(frozenset(S), f)


def solve_crbds(inst: CrbdsInstance, partition, **limits) -> CrbdsResult:
    """Minimum capacitated red-blue dominating set via the tree-partition DP."""
    if not feasibility_precheck(inst):
        return CrbdsResult("infeasible")
    gad = gadgetize_subdivisions(inst, partition)
    dp = CrbdsDP(gad.instance, gad.partition, **limits)
    size = dp.run()
    if size is None:
        raise InvariantViolation("precheck passed but the root table has no full solution")
    w = dp.reconstruct()
    bad = crbds_violations(gad.instance, w, check_budget=False)
    if bad or len(w.dominators) != size:
        raise InvariantViolation("reconstructed witness is invalid: " + "; ".join(bad))
    w = gad.pull_back(w)
    size -= gad.offset
    status = "size" if size <= inst.budget else "over-budget"
    return CrbdsResult(status, size, w, dp.k, dp.breadth, dp)


def solve_cds(inst: CdsInstance, partition: TreePartition, **limits) -> CrbdsResult:
    """Capacitated dominating set through the red-blue form."""
    red = cds_to_crbds(inst, partition)
    res = solve_crbds(red.instance, red.partition, **limits)
    if res.witness is not None:
        res.witness = red.pull_back(res.witness)
    return res
