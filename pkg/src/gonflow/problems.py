"""Instance types for the orientation, flow and domination problems.

Each instance type has a matching ``*_violations`` function that checks a
candidate witness against the problem definition and returns a list of
human-readable violations (empty means valid).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .graphs import (
    FlowNetwork,
    Vertex,
    WeightedGraph,
    check_flow,
    weighted_outdegrees,
)

TRIVIAL_VERTEX = "_no"


def _need_all(G: WeightedGraph, mapping: Mapping, what: str) -> None:
    missing = [v for v in G.vertices if v not in mapping]
    if missing:
        raise ValueError(f"{what} missing for vertices {missing}")
    extra = [v for v in mapping if v not in G.incident]
    if extra:
        raise ValueError(f"{what} given for unknown vertices {extra}")


@dataclass(frozen=True, eq=False)
class OroInstance:
    """Outdegree restricted orientation: outdegree of v must lie in [lo, hi]."""

    graph: WeightedGraph
    intervals: Mapping
    trivial_no: bool = False

    def __post_init__(self):
        _need_all(self.graph, self.intervals, "interval")
        object.__setattr__(self, "intervals", {v: tuple(map(int, self.intervals[v])) for v in self.graph.vertices})


@dataclass(frozen=True, eq=False)
class TooInstance:
    """Target outdegree orientation: outdegree of v must equal targets[v]."""

    graph: WeightedGraph
    targets: Mapping
    trivial_no: bool = False

    def __post_init__(self):
        _need_all(self.graph, self.targets, "target")


@dataclass(frozen=True, eq=False)
class CmoInstance:
    """Capacitated maximum outdegree orientation: outdegree of v at most bounds[v]."""

    graph: WeightedGraph
    bounds: Mapping
    trivial_no: bool = False

    def __post_init__(self):
        _need_all(self.graph, self.bounds, "bound")


@dataclass(frozen=True, eq=False)
class MmoInstance:
    """Minimum maximum outdegree: every outdegree at most ``r``."""

    graph: WeightedGraph
    r: int


@dataclass(frozen=True, eq=False)
class CoInstance:
    """Circulating orientation: weighted indegree equals outdegree everywhere."""

    graph: WeightedGraph
    trivial_no: bool = False


@dataclass(frozen=True, eq=False)
class UflbInstance:
    """Undirected flow with lower bounds.

    Edge weights of ``graph`` are the capacities; ``lower`` maps edge ids to
    lower bounds (missing ids mean 0).
    """

    graph: WeightedGraph
    lower: Mapping
    source: Vertex
    sink: Vertex
    value: int
    trivial_no: bool = False

    def __post_init__(self):
        low = {e.id: int(self.lower.get(e.id, 0)) for e in self.graph.edges}
        for e in self.graph.edges:
            if not 0 <= low[e.id] <= e.weight:
                raise ValueError(f"edge {e.id}: lower bound outside [0, c]")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        if self.source not in self.graph.incident or self.sink not in self.graph.incident:
            raise ValueError("source and sink must be vertices of the graph")
        if self.value < 0:
            raise ValueError("flow value must be non-negative")
        object.__setattr__(self, "lower", low)


@dataclass(frozen=True, eq=False)
class AonfInstance:
    """All-or-nothing flow: each arc carries 0 or its full capacity."""

    network: FlowNetwork
    value: int
    trivial_no: bool = False

    def __post_init__(self):
        if any(a.lower for a in self.network.arcs):
            raise ValueError("all-or-nothing arcs carry no lower bounds")
        if self.network.source == self.network.sink:
            raise ValueError("source and sink must differ")
        if self.value < 0:
            raise ValueError("flow value must be non-negative")


@dataclass(frozen=True, eq=False)
class CdsInstance:
    """Capacitated dominating set on an unweighted graph."""

    graph: WeightedGraph
    capacity: Mapping
    budget: int

    def __post_init__(self):
        _need_all(self.graph, self.capacity, "capacity")
        if any(c < 1 for c in self.capacity.values()):
            raise ValueError("capacities must be at least 1")


@dataclass(frozen=True, eq=False)
class CrbdsInstance:
    """Capacitated red-blue dominating set on a bipartite graph.

    ``anchors`` optionally binds a blue vertex to a red vertex: whenever
    that red vertex is chosen, the blue vertex must be assigned to it.
    """

    graph: WeightedGraph
    red: frozenset
    blue: frozenset
    capacity: Mapping
    budget: int
    anchors: Mapping = field(default_factory=dict)

    def __post_init__(self):
        red, blue = frozenset(self.red), frozenset(self.blue)
        if red & blue or (red | blue) != set(self.graph.vertices):
            raise ValueError("red and blue must partition the vertex set")
        for e in self.graph.edges:
            if (e.u in red) == (e.v in red):
                raise ValueError(f"edge {e.id} does not join a red and a blue vertex")
        if set(self.capacity) != red:
            raise ValueError("capacities must be given for exactly the red vertices")
        if any(c < 1 for c in self.capacity.values()):
            raise ValueError("capacities must be at least 1")
        for b, r in self.anchors.items():
            if b not in blue or r not in red or r not in self.graph.neighbors(b):
                raise ValueError(f"anchor {b!r}->{r!r} must join adjacent blue and red vertices")
        if len(set(self.anchors.values())) != len(self.anchors):
            raise ValueError("a red vertex anchors at most one blue vertex")
        object.__setattr__(self, "red", red)
        object.__setattr__(self, "blue", blue)


class UflbWitness(NamedTuple):
    orientation: dict
    flow: dict


class DominationWitness(NamedTuple):
    dominators: frozenset
    assignment: dict


def trivial_no_graph() -> WeightedGraph:
    return WeightedGraph((TRIVIAL_VERTEX,), ())


def as_oro(inst) -> OroInstance:
    """Interval view of any member of the orientation family."""
    G = inst.graph
    if isinstance(inst, OroInstance):
        return inst
    if isinstance(inst, TooInstance):
        return OroInstance(G, {v: (inst.targets[v],) * 2 for v in G.vertices}, inst.trivial_no)
    if isinstance(inst, CmoInstance):
        return OroInstance(G, {v: (0, inst.bounds[v]) for v in G.vertices}, inst.trivial_no)
    if isinstance(inst, MmoInstance):
        return OroInstance(G, {v: (0, inst.r) for v in G.vertices})
    if isinstance(inst, CoInstance):
        ivs = {}
        for v in G.vertices:
            d = G.weighted_degree(v)
            # odd degree: an empty interval encodes the impossibility
            ivs[v] = (d // 2, d // 2) if d % 2 == 0 else (1, 0)
        return OroInstance(G, ivs, inst.trivial_no)
    raise TypeError(f"not an orientation problem: {type(inst).__name__}")


def orientation_violations(inst, o: Mapping) -> list:
    """Violations of an orientation witness for ORO/TOO/CMO/MMO/CO."""
    oro = as_oro(inst)
    try:
        out = weighted_outdegrees(oro.graph, o)
    except ValueError as exc:
        return [str(exc)]
    bad = []
    for v in oro.graph.vertices:
        lo, hi = oro.intervals[v]
        if not lo <= out[v] <= hi:
            bad.append(f"vertex {v!r}: outdegree {out[v]} outside [{lo}, {hi}]")
    return bad


def uflb_network(inst: UflbInstance, orientation: Mapping) -> FlowNetwork:
    """Directed network obtained by orienting every edge of a UFLB instance."""
    arcs = []
    for e in inst.graph.edges:
        tail, head = orientation[e.id]
        arcs.append((e.id, tail, head, e.weight, inst.lower[e.id]))
    return FlowNetwork(inst.graph.vertices, tuple(arcs), inst.source, inst.sink)


def uflb_violations(inst: UflbInstance, w: UflbWitness) -> list:
    o, f = w
    try:
        weighted_outdegrees(inst.graph, o)
    except ValueError as exc:
        return [str(exc)]
    return check_flow(uflb_network(inst, o), f, inst.value).violations


def aonf_violations(inst: AonfInstance, f: Mapping) -> list:
    bad = list(check_flow(inst.network, f, inst.value).violations)
    for a in inst.network.arcs:
        x = f.get(a.id, 0)
        if x not in (0, a.cap):
            bad.append(f"arc {a.id}: flow {x} is neither 0 nor the capacity {a.cap}")
    return bad


def crbds_violations(inst: CrbdsInstance, w: DominationWitness, check_budget: bool = True) -> list:
    S, f = frozenset(w.dominators), w.assignment
    bad = []
    if not S <= inst.red:
        bad.append("dominators must be red vertices")
    if check_budget and len(S) > inst.budget:
        bad.append(f"{len(S)} dominators exceed budget {inst.budget}")
    load: dict = {}
    for b in inst.blue:
        r = f.get(b)
        if r is None:
            bad.append(f"blue vertex {b!r} is not assigned")
            continue
        if r not in S:
            bad.append(f"blue vertex {b!r} assigned to non-dominator {r!r}")
        if r not in inst.graph.neighbors(b):
            bad.append(f"blue vertex {b!r} assigned to non-neighbour {r!r}")
        load[r] = load.get(r, 0) + 1
    for r, n in load.items():
        if r in inst.capacity and n > inst.capacity[r]:
            bad.append(f"red vertex {r!r} serves {n} > capacity {inst.capacity[r]}")
    for b, r in inst.anchors.items():
        if r in S and f.get(b) != r:
            bad.append(f"anchored blue {b!r} must be assigned to chosen {r!r}")
    return bad


def cds_violations(inst: CdsInstance, w: DominationWitness, check_budget: bool = True) -> list:
    D, f = frozenset(w.dominators), w.assignment
    G = inst.graph
    bad = []
    if not D <= set(G.vertices):
        bad.append("dominators must be vertices")
    if check_budget and len(D) > inst.budget:
        bad.append(f"{len(D)} dominators exceed budget {inst.budget}")
    load: dict = {}
    for v in G.vertices:
        if v in D:
            continue
        u = f.get(v)
        if u is None:
            bad.append(f"vertex {v!r} is neither chosen nor assigned")
            continue
        if u not in D or u not in G.neighbors(v):
            bad.append(f"vertex {v!r} assigned to {u!r}, not a chosen neighbour")
        load[u] = load.get(u, 0) + 1
    for u, n in load.items():
        if n > inst.capacity.get(u, 0):
            bad.append(f"vertex {u!r} dominates {n} > capacity {inst.capacity.get(u, 0)}")
    return bad


def witness_violations(inst, witness) -> list:
    """Dispatch to the validator matching the instance type."""
    if isinstance(inst, (OroInstance, TooInstance, CmoInstance, MmoInstance, CoInstance)):
        return orientation_violations(inst, witness)
    if isinstance(inst, UflbInstance):
        return uflb_violations(inst, UflbWitness(*witness))
    if isinstance(inst, AonfInstance):
        return aonf_violations(inst, witness)
    if isinstance(inst, CrbdsInstance):
        return crbds_violations(inst, DominationWitness(*witness))
    if isinstance(inst, CdsInstance):
        return cds_violations(inst, DominationWitness(*witness))
    raise TypeError(f"unknown instance type {type(inst).__name__}")
