"""Exact integer linear programming over bounded boxes.

Depth-first branch and bound.  Every node tightens variable bounds from
each constraint until nothing changes, then branches on the unfixed
variable with the smallest domain, trying values in ascending order.
With an objective, the incumbent value becomes an extra ``<=`` row so the
same propagation prunes by bound.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Hashable, Mapping

INFEASIBLE = "infeasible"
FEASIBLE = "feasible"
OPTIMAL = "optimal"
RESOURCE = "resource"

DEFAULT_NODE_BUDGET = 2_000_000


def default_node_budget() -> int:
    raw = os.environ.get("GONFLOW_NODE_BUDGET")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


class ResourceLimitError(RuntimeError):
    """A configured search or size limit was exceeded."""


@dataclass
class IlpModel:
    variables: dict = field(default_factory=dict)  # name -> (lo, hi)
    constraints: list = field(default_factory=list)  # (coeffs, sense, rhs)
    objective: dict | None = None

    def add_var(self, name: Hashable, lo: int, hi: int) -> Hashable:
        if name in self.variables:
            raise ValueError(f"variable {name!r} declared twice")
        self.variables[name] = (int(lo), int(hi))
        return name

    def add_constraint(self, coeffs: Mapping, sense: str, rhs: int) -> None:
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown relation {sense!r}")
        for name in coeffs:
            if name not in self.variables:
                raise ValueError(f"constraint uses undeclared variable {name!r}")
        self.constraints.append(({k: int(c) for k, c in coeffs.items() if c}, sense, int(rhs)))

    def minimize(self, coeffs: Mapping) -> None:
        for name in coeffs:
            if name not in self.variables:
                raise ValueError(f"objective uses undeclared variable {name!r}")
        self.objective = {k: int(c) for k, c in coeffs.items() if c}


@dataclass
class IlpResult:
    status: str
    assignment: dict | None = None
    value: int | None = None
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.status in (FEASIBLE, OPTIMAL)


def constraint_violations(model: IlpModel, x: Mapping) -> list:
    """Independent re-check of an assignment against bounds and rows."""
    bad = []
    for name, (lo, hi) in model.variables.items():
        if name not in x or not lo <= x[name] <= hi:
            bad.append(f"variable {name!r} outside [{lo}, {hi}]")
    for coeffs, sense, rhs in model.constraints:
        lhs = sum(c * x.get(k, 0) for k, c in coeffs.items())
        ok = lhs <= rhs if sense == "<=" else lhs >= rhs if sense == ">=" else lhs == rhs
        if not ok:
            bad.append(f"row {coeffs} {sense} {rhs} evaluates to {lhs}")
    return bad


def _tighten(rows, var_rows, lo, hi, dirty) -> bool:
    """Propagate ``sum a_i x_i <= b`` rows to a fixpoint; False if infeasible."""
    queue = list(dirty)
    queued = set(queue)
    while queue:
        r = queue.pop()
        queued.discard(r)
        terms, b = rows[r]
        minsum = 0
        for i, a in terms:
            minsum += a * lo[i] if a > 0 else a * hi[i]
        if minsum > b:
            return False
        for i, a in terms:
            if a > 0:
                slack = b - minsum + a * lo[i]
                nh = slack // a
                if nh < hi[i]:
                    if nh < lo[i]:
                        return False
                    hi[i] = nh
                    changed = True
                else:
                    changed = False
            else:
                slack = b - minsum + a * hi[i]
                nl = -(slack // -a)
                if nl > lo[i]:
                    if nl > hi[i]:
                        return False
                    lo[i] = nl
                    changed = True
                else:
                    changed = False
            if changed:
                for r2 in var_rows[i]:
                    if r2 not in queued:
                        queued.add(r2)
                        queue.append(r2)
    return True


def solve_ilp(model: IlpModel, node_budget: int | None = None) -> IlpResult:
    """Decide feasibility, or minimize the objective when one is set."""
    budget = default_node_budget() if node_budget is None else node_budget
    names = list(model.variables)
    idx = {n: i for i, n in enumerate(names)}
    lo0 = [model.variables[n][0] for n in names]
    hi0 = [model.variables[n][1] for n in names]
    if any(l > h for l, h in zip(lo0, hi0)):
        return IlpResult(INFEASIBLE)
    rows = []
    for coeffs, sense, rhs in model.constraints:
        terms = [(idx[k], c) for k, c in coeffs.items()]
        if sense in ("<=", "=="):
            rows.append((terms, rhs))
        if sense in (">=", "=="):
            rows.append(([(i, -c) for i, c in terms], -rhs))
    obj = [(idx[k], c) for k, c in (model.objective or {}).items()]
    obj_row = None
    if model.objective is not None:
        obj_row = len(rows)
        ceiling = sum(max(c * lo0[i], c * hi0[i]) for i, c in obj)
        rows.append((obj, ceiling))
    var_rows = [[] for _ in names]
    for r, (terms, _) in enumerate(rows):
        for i, _c in terms:
            var_rows[i].append(r)

    def objective_at(x):
        return sum(c * x[i] for i, c in obj)

    best_x, best_val = None, None
    nodes = 0
    active = list(range(len(rows)))
    stack = [(lo0, hi0)]
    exhausted = False
    while stack:
        lo, hi = stack.pop()
        lo, hi = lo[:], hi[:]
        nodes += 1
        if nodes > budget:
            exhausted = True
            break
        if not _tighten(rows, var_rows, lo, hi, active):
            continue
        pick, size = -1, None
        for i in range(len(names)):
            d = hi[i] - lo[i]
            if d > 0 and (size is None or d < size):
                pick, size = i, d
        if pick < 0:
            if obj_row is None:
                best_x = lo
                break
            val = objective_at(lo)
            if best_val is None or val < best_val:
                best_x, best_val = lo, val
                rows[obj_row] = (obj, val - 1)
            continue
        for value in range(hi[pick], lo[pick] - 1, -1):
            nlo, nhi = lo[:], hi[:]
            nlo[pick] = nhi[pick] = value
            stack.append((nlo, nhi))
    if exhausted and (obj_row is not None or best_x is None):
        x = None if best_x is None else dict(zip(names, best_x))
        return IlpResult(RESOURCE, x, best_val, nodes)
    if best_x is None:
        return IlpResult(INFEASIBLE, nodes=nodes)
    x = dict(zip(names, best_x))
    if obj_row is None:
        return IlpResult(FEASIBLE, x, None, nodes)
    return IlpResult(OPTIMAL, x, best_val, nodes)
