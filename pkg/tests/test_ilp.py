import pytest

from gonflow.ilp import IlpModel, constraint_violations, default_node_budget, solve_ilp
from gonflow.oracles import oracle_ilp


def test_fixed_value():
    m = IlpModel()
    m.add_var("x", 0, 5)
    m.add_constraint({"x": 1}, "==", 3)
    res = solve_ilp(m)
    assert res.status == "feasible" and res.assignment == {"x": 3}


def test_bound_arithmetic_infeasible():
    m = IlpModel()
    m.add_var("x", 0, 2)
    m.add_var("y", 0, 2)
    m.add_constraint({"x": 1, "y": 1}, "==", 5)
    assert solve_ilp(m).status == "infeasible"


def test_small_minimization():
    m = IlpModel()
    m.add_var("x", 0, 3)
    m.add_var("y", 0, 3)
    m.add_constraint({"x": 1, "y": 1}, ">=", 3)
    m.minimize({"x": 2, "y": 1})
    res = solve_ilp(m)
    assert res.status == "optimal" and res.value == 3
    assert res.assignment == {"x": 0, "y": 3}
    assert oracle_ilp(m) == (True, 3)


def test_empty_box_is_infeasible():
    m = IlpModel()
    m.add_var("x", 3, 1)
    assert solve_ilp(m).status == "infeasible"


def test_model_rejects_bad_input():
    m = IlpModel()
    m.add_var("x", 0, 1)
    with pytest.raises(ValueError):
        m.add_var("x", 0, 1)
    with pytest.raises(ValueError):
        m.add_constraint({"y": 1}, "<=", 0)
    with pytest.raises(ValueError):
        m.add_constraint({"x": 1}, "<", 0)
    with pytest.raises(ValueError):
        m.minimize({"z": 1})


def test_node_budget_is_enforced():
    m = IlpModel()
    for i in range(12):
        m.add_var(i, 0, 1)
    # parity constraint with no solution; propagation cannot see it
    m.add_constraint({i: 2 for i in range(12)}, "==", 11)
    res = solve_ilp(m, node_budget=5)
    assert res.status == "resource" and not res.feasible


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("GONFLOW_NODE_BUDGET", "17")
    assert default_node_budget() == 17


def test_returned_assignments_satisfy_rows(rng):
    from gonflow.sampling import random_ilp
    for _ in range(200):
        m = random_ilp(rng)
        res = solve_ilp(m)
        feasible, best = oracle_ilp(m)
        assert res.feasible == feasible
        if feasible:
            assert constraint_violations(m, res.assignment) == []
            if m.objective is not None:
                assert res.value == best
