"""Brute-force reference solvers.

These decide each problem straight from its definition and share no code
with the dynamic programs or the reductions, so they can serve as ground
truth.  Exceeding an enumeration cap raises :class:`ResourceLimitError`
rather than answering "no".
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from .graphs import feasible_assignment, feasible_circulation
from .ilp import IlpModel, ResourceLimitError, solve_ilp, RESOURCE
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


def _outdegree_window(inst, v) -> tuple:
    """Admissible outdegree range of v, read off the problem definition."""
    G = inst.graph
    if isinstance(inst, OroInstance):
        return inst.intervals[v]
    if isinstance(inst, TooInstance):
        return inst.targets[v], inst.targets[v]
    if isinstance(inst, CmoInstance):
        return 0, inst.bounds[v]
    if isinstance(inst, MmoInstance):
        return 0, inst.r
    if isinstance(inst, CoInstance):
        d = G.weighted_degree(v)
        return (d // 2, d // 2) if d % 2 == 0 else (1, 0)
    raise TypeError(f"not an orientation problem: {type(inst).__name__}")


def _accepts(inst, out: dict) -> bool:
    G = inst.graph
    if isinstance(inst, CoInstance):
        return all(out[v] == G.weighted_degree(v) - out[v] for v in G.vertices)
    for v in G.vertices:
        lo, hi = _outdegree_window(inst, v)
        if not lo <= out[v] <= hi:
            return False
    return True


def oracle_oro(inst, cap: int = 24, method: str = "auto") -> dict | None:
    """First satisfying orientation in lexicographic edge-id order, or None.

    Works for ORO, TOO, CMO, MMO and CO.  ``method`` is ``"enumerate"``,
    ``"ilp"`` or ``"auto"`` (enumerate up to ``cap`` edges, ILP above).
    """
    G = inst.graph
    m = len(G.edges)
    if method == "auto":
        method = "enumerate" if m <= cap else "ilp"
    if method == "ilp":
        return _oro_by_ilp(inst)
    if m > cap:
        raise ResourceLimitError(f"{m} edges exceed the enumeration cap {cap}")
    window = {v: _outdegree_window(inst, v) for v in G.vertices}
    if any(lo > hi for lo, hi in window.values()):
        return None
    edges = list(G.edges)
    left = {v: G.weighted_degree(v) for v in G.vertices}
    out = {v: 0 for v in G.vertices}
    chosen = []

    def dfs(i):
        if i == m:
            return _accepts(inst, out)
        e = edges[i]
        left[e.u] -= e.weight
        left[e.v] -= e.weight
        for tail, head in ((e.u, e.v), (e.v, e.u)):
            out[tail] += e.weight
            ok = all(out[x] <= window[x][1] and out[x] + left[x] >= window[x][0] for x in (e.u, e.v))
            if ok:
                chosen.append((tail, head))
                if dfs(i + 1):
                    return True
                chosen.pop()
            out[tail] -= e.weight
        left[e.u] += e.weight
        left[e.v] += e.weight
        return False

    if not dfs(0):
        return None
    return {e.id: d for e, d in zip(edges, chosen)}


def _oro_by_ilp(inst) -> dict | None:
    G = inst.graph
    model = IlpModel()
    for e in G.edges:
        model.add_var(e.id, 0, 1)  # 1 means oriented u -> v
    for v in G.vertices:
        lo, hi = _outdegree_window(inst, v)
        coeffs, const = {}, 0
        for e in G.incident[v]:
            if e.u == v:
                coeffs[e.id] = e.weight
            else:
                coeffs[e.id] = -e.weight
                const += e.weight
        model.add_constraint(coeffs, ">=", lo - const)
        model.add_constraint(coeffs, "<=", hi - const)
    res = solve_ilp(model)
    if res.status == RESOURCE:
        raise ResourceLimitError("ILP node budget exhausted")
    if not res.feasible:
        return None
    o = {e.id: ((e.u, e.v) if res.assignment[e.id] else (e.v, e.u)) for e in G.edges}
    out = {v: 0 for v in G.vertices}
    for e in G.edges:
        out[o[e.id][0]] += e.weight
    assert _accepts(inst, out)
    return o


def oracle_aonf(inst: AonfInstance, cap: int = 16, method: str = "auto") -> dict | None:
    """All-or-nothing flow of the required value, or None."""
    N = inst.network
    m = len(N.arcs)
    if method == "auto":
        method = "enumerate" if m <= cap else "ilp"
    if method == "ilp":
        return _aonf_by_ilp(inst)
    if m > cap:
        raise ResourceLimitError(f"{m} arcs exceed the enumeration cap {cap}")
    arcs = list(N.arcs)
    for mask in range(1 << m):
        net = {v: 0 for v in N.vertices}
        for i, a in enumerate(arcs):
            if mask >> i & 1:
                net[a.tail] -= a.cap
                net[a.head] += a.cap
        if -net[N.source] != inst.value:
            continue
        if all(net[v] == 0 for v in N.vertices if v not in (N.source, N.sink)):
            return {a.id: (a.cap if mask >> i & 1 else 0) for i, a in enumerate(arcs)}
    return None


def _aonf_by_ilp(inst: AonfInstance) -> dict | None:
    N = inst.network
    model = IlpModel()
    rows = {v: {} for v in N.vertices}
    for a in N.arcs:
        model.add_var(a.id, 0, 1)
        rows[a.head][a.id] = rows[a.head].get(a.id, 0) + a.cap
        rows[a.tail][a.id] = rows[a.tail].get(a.id, 0) - a.cap
    for v in N.vertices:
        if v == N.source:
            model.add_constraint(rows[v], "==", -inst.value)
        elif v != N.sink:
            model.add_constraint(rows[v], "==", 0)
    res = solve_ilp(model)
    if res.status == RESOURCE:
        raise ResourceLimitError("ILP node budget exhausted")
    if not res.feasible:
        return None
    return {a.id: a.cap * res.assignment[a.id] for a in N.arcs}


def oracle_uflb(inst: UflbInstance, cap: int = 16) -> UflbWitness | None:
    """Try every orientation; each one is a directed flow problem with lower bounds."""
    G = inst.graph
    m = len(G.edges)
    if m > cap:
        raise ResourceLimitError(f"{m} edges exceed the enumeration cap {cap}")
    edges = list(G.edges)
    back = ("__value__",)
    for mask in range(1 << m):
        o = {e.id: ((e.v, e.u) if mask >> (m - 1 - i) & 1 else (e.u, e.v)) for i, e in enumerate(edges)}
        arcs = [(e.id, o[e.id][0], o[e.id][1], inst.lower[e.id], e.weight) for e in edges]
        arcs.append((back, inst.sink, inst.source, inst.value, inst.value))
        f = feasible_circulation(G.vertices, arcs)
        if f is not None:
            del f[back]
            return UflbWitness(o, f)
    return None


def _crbds_assign(inst: CrbdsInstance, S: frozenset) -> dict | None:
    fixed, caps = {}, {r: inst.capacity[r] for r in S}
    for b, r in inst.anchors.items():
        if r in S:
            fixed[b] = r
            caps[r] -= 1
    rest = [b for b in inst.blue if b not in fixed]
    options = {b: [r for r in inst.graph.neighbors(b) if r in S] for b in rest}
    f = feasible_assignment(rest, options, caps)
    if f is None:
        return None
    f.update(fixed)
    return f


def oracle_crbds(inst: CrbdsInstance, cap: int = 20) -> tuple | None:
    """Minimum number of dominators with a witness, ignoring the budget; None if infeasible."""
    reds = sorted(inst.red, key=str)
    if len(reds) > cap:
        raise ResourceLimitError(f"{len(reds)} red vertices exceed the cap {cap}")
    if _crbds_assign(inst, frozenset(reds)) is None:
        return None
    for size in range(len(reds) + 1):
        for S in combinations(reds, size):
            f = _crbds_assign(inst, frozenset(S))
            if f is not None:
                return size, DominationWitness(frozenset(S), f)
    return None


def oracle_cds(inst: CdsInstance, cap: int = 20) -> tuple | None:
    """Minimum capacitated dominating set size with a witness."""
    G = inst.graph
    vs = list(G.vertices)
    if len(vs) > cap:
        raise ResourceLimitError(f"{len(vs)} vertices exceed the cap {cap}")
    for size in range(len(vs) + 1):
        for D in combinations(vs, size):
            Dset = frozenset(D)
            rest = [v for v in vs if v not in Dset]
            options = {v: [u for u in G.neighbors(v) if u in Dset] for v in rest}
            f = feasible_assignment(rest, options, {u: inst.capacity[u] for u in D})
            if f is not None:
                return size, DominationWitness(Dset, f)
    return None


def oracle_binpacking(A: Sequence[int], B: int, k: int) -> list | None:
    """Split item indices into k groups each summing to B, or None."""
    if sum(A) != B * k:
        raise ValueError(f"item sum {sum(A)} differs from B*k = {B * k}")
    order = sorted(range(len(A)), key=lambda i: -A[i])

    @lru_cache(maxsize=None)
    def place(pos: int, loads: tuple):
        if pos == len(order):
            return () if all(x == B for x in loads) else None
        a = A[order[pos]]
        tried = set()
        for j, load in enumerate(loads):
            if load + a > B or load in tried:
                continue
            tried.add(load)
            nxt = list(loads)
            nxt[j] += a
            key = tuple(sorted(nxt))
            rest = place(pos + 1, key)
            if rest is not None:
                return ((load, a),) + rest
        return None

    steps = place(0, (0,) * k)
    if steps is None:
        return None
    # replay the recorded load choices to recover the bins
    bins = [[] for _ in range(k)]
    loads = [0] * k
    for pos, (load, a) in enumerate(steps):
        j = next(j for j in range(k) if loads[j] == load)
        bins[j].append(order[pos])
        loads[j] += a
    return bins


def oracle_nnccm(machine, cap: int = 10**6) -> list | None:
    """Counter vectors (one per test) of an accepting run, or None."""
    k, B, tests = machine.counters, machine.bound, machine.tests
    if (B + 1) ** k * max(len(tests), 1) > cap:
        raise ResourceLimitError("machine state space exceeds the cap")

    def successors(vec):
        def rec(j, cur):
            if j == k:
                yield tuple(cur)
                return
            for x in range(vec[j], B + 1):
                cur.append(x)
                yield from rec(j + 1, cur)
                cur.pop()
        yield from rec(0, [])

    @lru_cache(maxsize=None)
    def run_from(t: int, vec: tuple):
        if t == len(tests):
            return ()
        for nxt in successors(vec):
            i, a, j, b = tests[t]
            if nxt[i - 1] == a and nxt[j - 1] == b:
                continue
            rest = run_from(t + 1, nxt)
            if rest is not None:
                return (nxt,) + rest
        return None

    run = run_from(0, (0,) * k)
    return None if run is None else [list(v) for v in run]


def oracle_ilp(model: IlpModel, cap: int = 10**6) -> tuple:
    """Exhaustive box enumeration: ``(feasible, best objective value or None)``."""
    names = list(model.variables)
    size = 1
    for lo, hi in model.variables.values():
        size *= max(hi - lo + 1, 0)
    if size > cap:
        raise ResourceLimitError(f"box has {size} points, above the cap {cap}")
    pos = {x: i for i, x in enumerate(names)}
    rows = [([(pos[x], c) for x, c in coeffs.items()], sense, rhs) for coeffs, sense, rhs in model.constraints]
    obj = [(pos[x], c) for x, c in (model.objective or {}).items()]
    feasible, best = False, None
    ranges = [range(lo, hi + 1) for lo, hi in model.variables.values()]
    for point in product(*ranges):
        ok = True
        for terms, sense, rhs in rows:
            s = sum(c * point[i] for i, c in terms)
            if (sense == "<=" and s > rhs) or (sense == ">=" and s < rhs) or (sense == "==" and s != rhs):
                ok = False
                break
        if not ok:
            continue
        feasible = True
        if model.objective is None:
            return True, None
        val = sum(c * point[i] for i, c in obj)
        if best is None or val < best:
            best = val
    return feasible, best
