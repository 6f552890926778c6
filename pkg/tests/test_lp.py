from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from boolgames.lp import (
    Infeasible,
    LinearProgram,
    LpError,
    Optimal,
    Unbounded,
    objective_value,
    solution_unique,
    solve_lp,
    verify_solution,
)


def test_simple_maximization():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_variable("y")
    lp.add_constraint({"x": 1, "y": 2}, "<=", 4)
    lp.add_constraint({"x": 3, "y": 1}, "<=", 6)
    lp.set_objective({"x": 1, "y": 1}, "maximize")
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == Fraction(14, 5)
    assert out.solution["x"] == Fraction(8, 5)
    assert verify_solution(lp, out.solution)


def test_minimization_and_equality():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_variable("y")
    lp.add_constraint({"x": 1, "y": 1}, "=", 1)
    lp.set_objective({"x": 2, "y": 3}, "minimize")
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == 2
    assert out.solution == {"x": Fraction(1), "y": Fraction(0)}


def test_free_variable():
    lp = LinearProgram()
    lp.add_variable("v", nonneg=False)
    lp.add_constraint({"v": 1}, "<=", -3)
    lp.set_objective({"v": 1}, "maximize")
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == -3


def test_infeasible():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.add_constraint({"x": 1}, ">=", 2)
    lp.set_objective({"x": 1}, "maximize")
    assert isinstance(solve_lp(lp), Infeasible)


def test_unbounded():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, ">=", 0)
    lp.set_objective({"x": 1}, "maximize")
    assert isinstance(solve_lp(lp), Unbounded)


def test_degenerate_cycling_guard():
    # classic Beale-style degeneracy; Bland's rule must terminate
    lp = LinearProgram()
    for n in ("x1", "x2", "x3", "x4"):
        lp.add_variable(n)
    lp.add_constraint({"x1": Fraction(1, 4), "x2": -8, "x3": -1, "x4": 9},
                      "<=", 0)
    lp.add_constraint({"x1": Fraction(1, 2), "x2": -12, "x3": Fraction(-1, 2),
                       "x4": 3}, "<=", 0)
    lp.add_constraint({"x3": 1}, "<=", 1)
    lp.set_objective({"x1": Fraction(3, 4), "x2": -20, "x3": Fraction(1, 2),
                      "x4": -6}, "maximize")
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == Fraction(5, 4)


def test_verify_solution_rejects_violations():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.set_objective({"x": 1}, "maximize")
    assert not verify_solution(lp, {"x": Fraction(2)})
    assert not verify_solution(lp, {"x": Fraction(-1)})
    assert verify_solution(lp, {"x": Fraction(1, 2)})


def test_objective_value():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_variable("y")
    lp.set_objective({"x": 2, "y": -1}, "maximize")
    assert objective_value(lp, {"x": Fraction(3), "y": Fraction(1)}) == 5


def test_solution_uniqueness():
    # unique optimum at a vertex
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_variable("y")
    lp.add_constraint({"x": 1, "y": 1}, "<=", 1)
    lp.set_objective({"x": 2, "y": 1}, "maximize")
    out = solve_lp(lp)
    assert solution_unique(lp, out.solution)

    # a whole edge is optimal
    lp2 = LinearProgram()
    lp2.add_variable("x")
    lp2.add_variable("y")
    lp2.add_constraint({"x": 1, "y": 1}, "<=", 1)
    lp2.set_objective({"x": 1, "y": 1}, "maximize")
    out2 = solve_lp(lp2)
    assert not solution_unique(lp2, out2.solution)


def test_copy_is_independent():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.set_objective({"x": 1}, "maximize")
    probe = lp.copy()
    probe.add_constraint({"x": 1}, "<=", Fraction(1, 2))
    assert solve_lp(lp).value == 1
    assert solve_lp(probe).value == Fraction(1, 2)


@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=2,
                max_size=2),
       st.integers(min_value=1, max_value=5))
def test_duality_gap_zero_on_boxes(costs, bound):
    # max c.x subject to 0 <= x <= bound is attained coordinatewise
    lp = LinearProgram()
    for i in range(2):
        lp.add_variable("x%d" % i)
        lp.add_constraint({"x%d" % i: 1}, "<=", bound)
    lp.set_objective({"x%d" % i: costs[i] for i in range(2)}, "maximize")
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == sum(bound * c for c in costs if c > 0)
    assert verify_solution(lp, out.solution)
