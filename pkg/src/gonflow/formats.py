"""Line-oriented text formats shared by every file the command line reads or writes.

Each line is a directive followed by whitespace-separated tokens; ``#``
starts a comment.  Tokens that look like integers are read as ``int``,
everything else as ``str``.  Parse failures raise :class:`ParseError`
carrying the 1-based line and column of the offending token.

Instance files::

    problem TOO
    v a b c
    e 0 a b 2          # edge id, ends, weight (UFLB: capacity [lower])
    target a 1

Witness files use ``orient``, ``flow``, ``dominator`` and ``assign``.
Partition files use ``tnode``, ``tarc``, ``bag``, ``root`` and ``chain``;
``flag pathdecomp`` turns the ``bag`` lines into an ordered path
decomposition.  Morphism files hold the base graph, ``refine`` steps and
the tree maps.  Machine files use ``counters``, ``bound`` and ``test``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graphs import Arc, Edge, FlowNetwork, WeightedGraph, sorted_vertices, weighted_to_multigraph
from .hardness import NnccmMachine
from .ilp import IlpModel
from .problems import (
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
)
from .trees import (
    HarmonicMorphism,
    PathDecomposition,
    RefinementStep,
    SubdividedPartition,
    TreePartition,
    replay_refinement,
    subdivide_along,
)

PROBLEMS = ("ORO", "TOO", "CMO", "MMO", "CO", "UFLB", "AONF", "CDS", "CRBDS")
_INT = re.compile(r"[+-]?\d+\Z")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message, self.line, self.column = message, line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass
class Token:
    value: object
    line: int
    column: int

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column)


@dataclass
class Line:
    directive: Token
    args: list

    @property
    def name(self) -> str:
        return self.directive.value

    def arity(self, lo: int, hi: int | None = None) -> None:
        hi = lo if hi is None else hi
        n = len(self.args)
        if n < lo or (hi >= 0 and n > hi):
            want = f"{lo}" if lo == hi else (f"at least {lo}" if hi < 0 else f"{lo} to {hi}")
            at = self.args[hi] if hi >= 0 and n > hi else self.directive
            raise at.error(f"'{self.name}' takes {want} arguments, got {n}")

    def int(self, i: int, minimum: int | None = None) -> int:
        tok = self.args[i]
        if not isinstance(tok.value, int):
            raise tok.error(f"expected an integer, got {tok.value!r}")
        if minimum is not None and tok.value < minimum:
            raise tok.error(f"expected an integer >= {minimum}, got {tok.value}")
        return tok.value

    def values(self, start: int = 0) -> list:
        return [t.value for t in self.args[start:]]


def _convert(text: str):
    return int(text) if _INT.match(text) else text


def tokenize(text: str) -> list:
    """Split into :class:`Line` records, dropping blank lines and comments."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [Token(_convert(m.group()), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            if not isinstance(toks[0].value, str):
                raise toks[0].error(f"expected a directive, got {toks[0].value!r}")
            out.append(Line(toks[0], toks[1:]))
    return out


def _fmt(x) -> str:
    s = str(x)
    if not s or any(c.isspace() for c in s) or "#" in s:
        raise ValueError(f"identifier {x!r} cannot be written to a text file")
    return s


# --------------------------------------------------------------------------
# instances


@dataclass
class ParsedInstance:
    problem: str
    instance: object
    manifest: dict = field(default_factory=dict)


class _GraphBuilder:
    """Collects ``v``/``e`` lines and checks ids as they arrive."""

    def __init__(self):
        self.vertices: dict = {}
        self.edges: dict = {}
        self.pairs: set = set()
        self.extra: dict = {}  # edge id -> trailing values

    def vertex(self, ln: Line) -> None:
        ln.arity(1, -1)
        for tok in ln.args:
            if tok.value in self.vertices:
                raise tok.error(f"vertex {tok.value!r} declared twice")
            self.vertices[tok.value] = tok

    def ref(self, tok: Token):
        if tok.value not in self.vertices:
            raise tok.error(f"unknown vertex {tok.value!r}")
        return tok.value

    def edge(self, ln: Line, lo: int = 3, hi: int = 4) -> None:
        ln.arity(lo, hi)
        eid = ln.int(0)
        if eid in self.edges:
            raise ln.args[0].error(f"edge id {eid} used twice")
        u, v = self.ref(ln.args[1]), self.ref(ln.args[2])
        if u == v:
            raise ln.args[2].error(f"edge {eid} is a loop")
        pair = frozenset((u, v))
        if pair in self.pairs:
            raise ln.args[2].error(f"edge {eid} is parallel to another edge")
        self.pairs.add(pair)
        w = ln.int(3, 1) if len(ln.args) > 3 else 1
        self.edges[eid] = Edge(eid, u, v, w)
        self.extra[eid] = [ln.int(i, 0) for i in range(4, len(ln.args))]

    def graph(self) -> WeightedGraph:
        return WeightedGraph(tuple(self.vertices), tuple(self.edges.values()))


def _once(seen: dict, ln: Line):
    if ln.name in seen:
        raise ln.directive.error(f"'{ln.name}' given twice")
    seen[ln.name] = ln


def parse_instance(text: str) -> ParsedInstance:
    lines = tokenize(text)
    gb = _GraphBuilder()
    arcs: dict = {}
    per_vertex: dict = {}  # directive -> {vertex: (values, line)}
    single: dict = {}
    red, blue, anchors, flags, manifest = [], [], {}, set(), {}
    problem = None
    for ln in lines:
        name = ln.name
        if name == "problem":
            ln.arity(1)
            _once(single, ln)
            problem = str(ln.args[0].value).upper()
            if problem not in PROBLEMS:
                raise ln.args[0].error(f"unknown problem {ln.args[0].value!r}; expected one of {', '.join(PROBLEMS)}")
        elif name == "v":
            gb.vertex(ln)
        elif name == "e":
            gb.edge(ln, 3, 5 if problem == "UFLB" else 4)
        elif name == "arc":
            ln.arity(4)
            aid = ln.int(0)
            if aid in arcs:
                raise ln.args[0].error(f"arc id {aid} used twice")
            tail, head = gb.ref(ln.args[1]), gb.ref(ln.args[2])
            if tail == head:
                raise ln.args[2].error(f"arc {aid} is a loop")
            arcs[aid] = Arc(aid, tail, head, ln.int(3, 1))
        elif name in ("target", "bound", "cap", "interval"):
            ln.arity(3 if name == "interval" else 2)
            v = gb.ref(ln.args[0])
            table = per_vertex.setdefault(name, {})
            if v in table:
                raise ln.args[0].error(f"'{name}' for vertex {v!r} given twice")
            vals = [ln.int(i, 0 if name != "cap" else 1) for i in range(1, len(ln.args))]
            table[v] = vals
        elif name in ("source", "sink"):
            ln.arity(1)
            _once(single, ln)
            gb.ref(ln.args[0])
        elif name in ("value", "budget", "maxout"):
            ln.arity(1)
            _once(single, ln)
            ln.int(0, 0)
        elif name in ("red", "blue"):
            ln.arity(1, -1)
            for tok in ln.args:
                (red if name == "red" else blue).append(gb.ref(tok))
        elif name == "anchor":
            ln.arity(2)
            b, r = gb.ref(ln.args[0]), gb.ref(ln.args[1])
            if b in anchors:
                raise ln.args[0].error(f"blue vertex {b!r} anchored twice")
            anchors[b] = r
        elif name == "flag":
            ln.arity(1)
            if ln.args[0].value != "trivial-no":
                raise ln.args[0].error(f"unknown flag {ln.args[0].value!r}")
            flags.add("trivial-no")
        elif name == "manifest":
            ln.arity(2, -1)
            manifest[str(ln.args[0].value)] = ln.values(1) if len(ln.args) > 2 else ln.args[1].value
        else:
            raise ln.directive.error(f"unknown directive {name!r}")
    if problem is None:
        raise ParseError("missing 'problem' line", 1 if not lines else lines[0].directive.line, 1)
    try:
        inst = _build_instance(problem, gb, arcs, per_vertex, single, red, blue, anchors, "trivial-no" in flags)
    except ParseError:
        raise
    except (ValueError, KeyError) as exc:
        raise ParseError(f"invalid {problem} instance: {exc}") from None
    return ParsedInstance(problem, inst, manifest)


def _need(single: dict, name: str, problem: str) -> Line:
    if name not in single:
        raise ParseError(f"{problem} instance needs a '{name}' line")
    return single[name]


def _table(per_vertex, name, G, problem, default=None) -> dict:
    table = per_vertex.get(name, {})
    missing = [v for v in G.vertices if v not in table]
    if missing and default is None:
        raise ParseError(f"{problem} instance: '{name}' missing for vertices {missing}")
    return {v: (table[v] if v in table else default) for v in G.vertices}


def _require_connected(G, problem):
    if not G.is_connected():
        raise ParseError(f"{problem} instance graph is not connected")


def _build_instance(problem, gb, arcs, per_vertex, single, red, blue, anchors, trivial):
    allowed = {
        "ORO": {"interval"}, "TOO": {"target"}, "CMO": {"bound"}, "MMO": set(), "CO": set(),
        "UFLB": set(), "AONF": set(), "CDS": {"cap"}, "CRBDS": {"cap"},
    }[problem]
    for name, table in per_vertex.items():
        if name not in allowed:
            raise ParseError(f"'{name}' lines do not belong in a {problem} instance")
    if problem == "AONF":
        if gb.edges:
            raise ParseError("AONF instances use 'arc' lines, not 'e' lines")
        src = _need(single, "source", problem).args[0].value
        snk = _need(single, "sink", problem).args[0].value
        N = FlowNetwork(tuple(gb.vertices), tuple(arcs.values()), src, snk)
        if not N.is_connected():
            raise ParseError("AONF network is not weakly connected")
        return AonfInstance(N, _need(single, "value", problem).args[0].value, trivial)
    if arcs:
        raise ParseError(f"'arc' lines do not belong in a {problem} instance")
    G = gb.graph()
    if problem != "CRBDS":
        _require_connected(G, problem)
    if problem == "ORO":
        return OroInstance(G, {v: tuple(x) for v, x in _table(per_vertex, "interval", G, problem).items()}, trivial)
    if problem == "TOO":
        return TooInstance(G, {v: x[0] for v, x in _table(per_vertex, "target", G, problem).items()}, trivial)
    if problem == "CMO":
        return CmoInstance(G, {v: x[0] for v, x in _table(per_vertex, "bound", G, problem).items()}, trivial)
    if problem == "MMO":
        return MmoInstance(G, _need(single, "maxout", problem).args[0].value)
    if problem == "CO":
        return CoInstance(G, trivial)
    if problem == "UFLB":
        lower = {eid: (ex[0] if ex else 0) for eid, ex in gb.extra.items()}
        return UflbInstance(
            G, lower,
            _need(single, "source", problem).args[0].value,
            _need(single, "sink", problem).args[0].value,
            _need(single, "value", problem).args[0].value,
            trivial,
        )
    if problem == "CDS":
        caps = {v: x[0] for v, x in _table(per_vertex, "cap", G, problem).items()}
        budget = single["budget"].args[0].value if "budget" in single else len(G.vertices)
        return CdsInstance(G, caps, budget)
    # CRBDS
    caps = {v: x[0] for v, x in per_vertex.get("cap", {}).items()}
    budget = single["budget"].args[0].value if "budget" in single else len(set(red))
    return CrbdsInstance(G, frozenset(red), frozenset(blue), caps, budget, anchors)


def problem_name(inst) -> str:
    for name, cls in (
        ("ORO", OroInstance), ("TOO", TooInstance), ("CMO", CmoInstance), ("MMO", MmoInstance),
        ("CO", CoInstance), ("UFLB", UflbInstance), ("AONF", AonfInstance), ("CDS", CdsInstance),
        ("CRBDS", CrbdsInstance),
    ):
        if isinstance(inst, cls):
            return name
    raise TypeError(f"unknown instance type {type(inst).__name__}")


def _graph_lines(G: WeightedGraph, lower: dict | None = None) -> list:
    out = [f"v {_fmt(v)}" for v in G.vertices]
    for e in G.edges:
        tail = f" {lower[e.id]}" if lower and lower.get(e.id) else ""
        out.append(f"e {e.id} {_fmt(e.u)} {_fmt(e.v)} {e.weight}{tail}")
    return out


def write_instance(inst, manifest: dict | None = None) -> str:
    name = problem_name(inst)
    out = [f"problem {name}"]
    if getattr(inst, "trivial_no", False):
        out.append("flag trivial-no")
    for k, val in (manifest or {}).items():
        vals = " ".join(map(_fmt, val)) if isinstance(val, (list, tuple)) else _fmt(val)
        out.append(f"manifest {_fmt(k)} {vals}")
    if name == "AONF":
        N = inst.network
        out += [f"v {_fmt(v)}" for v in N.vertices]
        out += [f"arc {a.id} {_fmt(a.tail)} {_fmt(a.head)} {a.cap}" for a in N.arcs]
        out += [f"source {_fmt(N.source)}", f"sink {_fmt(N.sink)}", f"value {inst.value}"]
        return "\n".join(out) + "\n"
    G = inst.graph
    out += _graph_lines(G, inst.lower if name == "UFLB" else None)
    if name == "ORO":
        out += [f"interval {_fmt(v)} {lo} {hi}" for v, (lo, hi) in inst.intervals.items()]
    elif name == "TOO":
        out += [f"target {_fmt(v)} {d}" for v, d in inst.targets.items()]
    elif name == "CMO":
        out += [f"bound {_fmt(v)} {m}" for v, m in inst.bounds.items()]
    elif name == "MMO":
        out.append(f"maxout {inst.r}")
    elif name == "UFLB":
        out += [f"source {_fmt(inst.source)}", f"sink {_fmt(inst.sink)}", f"value {inst.value}"]
    elif name == "CDS":
        out += [f"cap {_fmt(v)} {c}" for v, c in inst.capacity.items()]
        out.append(f"budget {inst.budget}")
    elif name == "CRBDS":
        out.append("red " + " ".join(_fmt(v) for v in sorted_vertices(inst.red)))
        out.append("blue " + " ".join(_fmt(v) for v in sorted_vertices(inst.blue)))
        out += [f"cap {_fmt(v)} {inst.capacity[v]}" for v in sorted_vertices(inst.red)]
        out += [f"anchor {_fmt(b)} {_fmt(r)}" for b, r in sorted(inst.anchors.items(), key=lambda p: str(p[0]))]
        out.append(f"budget {inst.budget}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# witnesses


def parse_witness(text: str, problem: str):
    """Witness object matching ``problem`` (orientation dict, flow dict, or tuple)."""
    problem = problem.upper()
    orient, flow, doms, assign = {}, {}, [], {}
    for ln in tokenize(text):
        if ln.name == "orient":
            ln.arity(3)
            eid = ln.int(0)
            if eid in orient:
                raise ln.args[0].error(f"edge {eid} oriented twice")
            orient[eid] = (ln.args[1].value, ln.args[2].value)
        elif ln.name == "flow":
            ln.arity(2)
            aid = ln.int(0)
            if aid in flow:
                raise ln.args[0].error(f"flow for {aid} given twice")
            flow[aid] = ln.int(1)
        elif ln.name == "dominator":
            ln.arity(1, -1)
            doms += ln.values()
        elif ln.name == "assign":
            ln.arity(2)
            if ln.args[0].value in assign:
                raise ln.args[0].error(f"vertex {ln.args[0].value!r} assigned twice")
            assign[ln.args[0].value] = ln.args[1].value
        else:
            raise ln.directive.error(f"unknown witness directive {ln.name!r}")
    if problem in ("ORO", "TOO", "CMO", "MMO", "CO"):
        return orient
    if problem == "UFLB":
        return UflbWitness(orient, flow)
    if problem == "AONF":
        return flow
    if problem in ("CDS", "CRBDS"):
        return DominationWitness(frozenset(doms), assign)
    raise ParseError(f"unknown problem {problem!r}")


def write_witness(witness, problem: str) -> str:
    problem = problem.upper()
    out = []
    if problem in ("ORO", "TOO", "CMO", "MMO", "CO", "UFLB"):
        o = witness.orientation if problem == "UFLB" else witness
        out += [f"orient {eid} {_fmt(t)} {_fmt(h)}" for eid, (t, h) in sorted(o.items())]
    if problem in ("UFLB", "AONF"):
        f = witness.flow if problem == "UFLB" else witness
        out += [f"flow {eid} {x}" for eid, x in sorted(f.items())]
    if problem in ("CDS", "CRBDS"):
        S, f = witness
        out += [f"dominator {_fmt(v)}" for v in sorted_vertices(S)]
        out += [f"assign {_fmt(b)} {_fmt(f[b])}" for b in sorted_vertices(f)]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# partitions and path decompositions


@dataclass
class ParsedPartition:
    partition: TreePartition | PathDecomposition
    chains: dict = field(default_factory=dict)
    arc_ids: dict = field(default_factory=dict)

    @property
    def is_path(self) -> bool:
        return isinstance(self.partition, PathDecomposition)

    def resolve(self, G: WeightedGraph):
        """Attach the partition to G, building the subdivision when chains are present."""
        if self.is_path:
            raise ParseError("a path decomposition is not a tree partition")
        if not self.chains:
            return self.partition
        for eid in self.chains:
            if eid not in G.edge_map:
                raise ParseError(f"chain for unknown edge {eid}")
        return subdivide_along(G, self.chains, self.partition)


def parse_partition(text: str) -> ParsedPartition:
    nodes: dict = {}
    bags: dict = {}
    ordered: list = []
    arcs, arc_ids, chains = [], {}, {}
    root, path = None, False
    seen_vertex: dict = {}
    lines = tokenize(text)
    for ln in lines:
        if ln.name == "flag":
            ln.arity(1)
            if ln.args[0].value != "pathdecomp":
                raise ln.args[0].error(f"unknown flag {ln.args[0].value!r}")
            path = True
    for ln in lines:
        name = ln.name
        if name == "flag":
            continue
        if name == "tnode":
            ln.arity(1, -1)
            for tok in ln.args:
                nodes.setdefault(tok.value, tok)
        elif name == "bag":
            if path:
                ordered.append(frozenset(ln.values()))
                continue
            ln.arity(1, -1)
            node = ln.args[0].value
            if node in bags:
                raise ln.args[0].error(f"bag {node!r} given twice")
            for tok in ln.args[1:]:
                if tok.value in seen_vertex:
                    raise tok.error(f"vertex {tok.value!r} already placed in bag {seen_vertex[tok.value]!r}")
                seen_vertex[tok.value] = node
            bags[node] = frozenset(ln.values(1))
            nodes.setdefault(node, ln.args[0])
        elif name == "tarc":
            ln.arity(2, 3)
            a, b = ln.args[0].value, ln.args[1].value
            for tok in ln.args[:2]:
                nodes.setdefault(tok.value, tok)
            arcs.append((a, b))
            aid = ln.args[2].value if len(ln.args) == 3 else len(arcs) - 1
            if aid in arc_ids:
                raise (ln.args[2] if len(ln.args) == 3 else ln.directive).error(f"tree arc id {aid!r} used twice")
            arc_ids[aid] = (a, b)
        elif name == "root":
            ln.arity(1)
            if root is not None:
                raise ln.directive.error("'root' given twice")
            root = ln.args[0]
        elif name == "chain":
            ln.arity(3, -1)
            eid = ln.int(0)
            if eid in chains:
                raise ln.args[0].error(f"chain for edge {eid} given twice")
            chains[eid] = tuple(ln.values(1))
        else:
            raise ln.directive.error(f"unknown partition directive {name!r}")
    if path:
        if arcs or chains or root is not None or nodes:
            raise ParseError("a path decomposition has only ordered 'bag' lines")
        return ParsedPartition(PathDecomposition(tuple(ordered)))
    if root is not None and root.value not in nodes:
        raise root.error(f"root {root.value!r} is not a tree node")
    full = {n: bags.get(n, frozenset()) for n in nodes}
    T = TreePartition(full, tuple(arcs), None if root is None else root.value)
    return ParsedPartition(T, chains, arc_ids)


def write_partition(P, chains: dict | None = None) -> str:
    """Text for a TreePartition, SubdividedPartition or PathDecomposition."""
    if isinstance(P, PathDecomposition):
        return "flag pathdecomp\n" + "".join("bag " + " ".join(map(_fmt, sorted_vertices(b))) + "\n" for b in P.bags)
    if isinstance(P, SubdividedPartition):
        chains = {eid: ch for eid, ch in P.chains.items() if len(ch) > 2}
        P = P.partition
    out = [f"root {_fmt(P.root)}"]
    for n in P.nodes:
        bag = sorted_vertices(P.bags[n])
        out.append(f"bag {_fmt(n)}" + "".join(" " + _fmt(v) for v in bag) if bag else f"tnode {_fmt(n)}")
    out += [f"tarc {_fmt(a)} {_fmt(b)}" for a, b in P.arcs]
    for eid, ch in sorted((chains or {}).items()):
        out.append(f"chain {eid} " + " ".join(map(_fmt, ch)))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# harmonic morphisms


@dataclass
class ParsedMorphism:
    graph: WeightedGraph
    morphism: HarmonicMorphism


def parse_morphism(text: str) -> ParsedMorphism:
    """Base graph, refinement trace and maps onto a tree.

    Edge ids in ``emap`` and ``index`` refer to the refined multigraph: a
    base edge of weight w becomes w unit edges numbered in base-id order,
    and each refinement step appends new edge ids after those.  Missing
    indices default to 1.
    """
    gb = _GraphBuilder()
    trace, tnodes, tarcs = [], {}, {}
    vmap, emap, index = {}, {}, {}
    for ln in tokenize(text):
        name = ln.name
        if name == "v":
            gb.vertex(ln)
        elif name == "e":
            gb.edge(ln)
        elif name == "refine":
            ln.arity(2)
            op = ln.args[0].value
            if op not in ("leaf", "subdivide"):
                raise ln.args[0].error(f"refinement must be 'leaf' or 'subdivide', got {op!r}")
            trace.append(RefinementStep(op, ln.args[1].value))
        elif name == "tnode":
            ln.arity(1, -1)
            for tok in ln.args:
                tnodes.setdefault(tok.value, tok)
        elif name == "tarc":
            ln.arity(3)
            aid = ln.args[0].value
            if aid in tarcs:
                raise ln.args[0].error(f"tree arc id {aid!r} used twice")
            for tok in ln.args[1:]:
                tnodes.setdefault(tok.value, tok)
            tarcs[aid] = (ln.args[1].value, ln.args[2].value)
        elif name in ("vmap", "emap", "index"):
            ln.arity(2)
            table = {"vmap": vmap, "emap": emap, "index": index}[name]
            key = ln.args[0].value if name == "vmap" else ln.int(0)
            if key in table:
                raise ln.args[0].error(f"'{name}' for {key!r} given twice")
            table[key] = ln.int(1, 1) if name == "index" else ln.args[1].value
        else:
            raise ln.directive.error(f"unknown morphism directive {name!r}")
    try:
        G = gb.graph()
        H = replay_refinement(weighted_to_multigraph(G), trace)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    for e in H.edges:
        index.setdefault(e.id, 1)
    M = HarmonicMorphism(H, tuple(tnodes), dict(tarcs), vmap, emap, index, tuple(trace))
    return ParsedMorphism(G, M)


# --------------------------------------------------------------------------
# counter machines and ILP models


def parse_machine(text: str) -> NnccmMachine:
    single, tests = {}, []
    for ln in tokenize(text):
        if ln.name in ("counters", "bound"):
            ln.arity(1)
            _once(single, ln)
            ln.int(0, 1 if ln.name == "counters" else 0)
        elif ln.name == "test":
            ln.arity(4)
            tests.append(tuple(ln.int(i, 0) for i in range(4)))
        else:
            raise ln.directive.error(f"unknown machine directive {ln.name!r}")
    for key in ("counters", "bound"):
        if key not in single:
            raise ParseError(f"machine file needs a '{key}' line")
    try:
        return NnccmMachine(single["counters"].args[0].value, single["bound"].args[0].value, tuple(tests))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_machine(m: NnccmMachine) -> str:
    out = [f"counters {m.counters}", f"bound {m.bound}"] + [f"test {i} {a} {j} {b}" for i, a, j, b in m.tests]
    return "\n".join(out) + "\n"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_][\w.]*)")
_REL = re.compile(r"<=|>=|==|=")


def _parse_linear(text: str, line: int, offset: int) -> dict:
    coeffs: dict = {}
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TERM.match(text, pos)
        if not m:
            raise ParseError(f"cannot read a term starting at {text[pos:].split()[0]!r}", line, offset + pos + 1)
        sign, num, name = m.groups()
        if not sign and coeffs:
            raise ParseError("terms must be joined by + or -", line, offset + pos + 1)
        c = int(num) if num else 1
        coeffs[name] = coeffs.get(name, 0) + (-c if sign == "-" else c)
        pos = m.end()
    if not coeffs:
        raise ParseError("empty linear expression", line, offset + 1)
    return coeffs


def parse_ilp(text: str) -> IlpModel:
    """``var x lo hi``, ``con <expr> <=|>=|= rhs`` and ``min <expr>`` lines."""
    model = IlpModel()
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        m = re.match(r"\s*(\S+)\s*", body)
        if not m:
            continue
        head, start = m.group(1), m.end()
        rest = body[start:]
        try:
            if head == "var":
                toks = list(re.finditer(r"\S+", rest))
                if len(toks) != 3:
                    raise ParseError("'var' takes a name and two integer bounds", lineno, start + 1)
                for t in toks[1:]:
                    if not _INT.match(t.group()):
                        raise ParseError(f"expected an integer, got {t.group()!r}", lineno, start + t.start() + 1)
                lo, hi = int(toks[1].group()), int(toks[2].group())
                if lo > hi:
                    raise ParseError(f"empty range [{lo}, {hi}]", lineno, start + toks[1].start() + 1)
                model.add_var(toks[0].group(), lo, hi)
            elif head == "con":
                rel = _REL.search(rest)
                if not rel:
                    raise ParseError("constraint needs <=, >= or =", lineno, start + 1)
                rhs = rest[rel.end():].strip()
                if not _INT.match(rhs):
                    raise ParseError(f"right-hand side must be an integer, got {rhs!r}", lineno, start + rel.end() + 1)
                sense = "==" if rel.group() in ("=", "==") else rel.group()
                model.add_constraint(_parse_linear(rest[: rel.start()], lineno, start), sense, int(rhs))
            elif head in ("min", "minimize"):
                if model.objective is not None:
                    raise ParseError("objective given twice", lineno, 1)
                model.minimize(_parse_linear(rest, lineno, start))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno, m.start(1) + 1)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), lineno, start + 1) from None
    return model
