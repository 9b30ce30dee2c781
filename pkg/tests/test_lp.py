import numpy as np
import pytest

from onesided.errors import InputError
from onesided.lp import (EQ, GE, LE, Constraint, LinearProgram, check_feasible, dump_lp,
                         solve)


def test_minimize_with_lower_bound():
    sol = solve(LinearProgram(np.array([1.0]), (Constraint([1.0], GE, 3.0),)))
    assert sol.status == "optimal"
    assert sol.values[0] == pytest.approx(3.0)
    assert sol.objective_value == pytest.approx(3.0)


def test_infeasible_pair():
    sol = solve(LinearProgram(np.array([1.0]),
                              (Constraint([1.0], LE, -1.0), Constraint([1.0], GE, 1.0))))
    assert sol.status == "infeasible"


def test_unbounded():
    sol = solve(LinearProgram(np.array([-1.0]), ()))
    assert sol.status == "unbounded"


def test_hand_reduced_hinge_instance():
    # minimize xi subject to xi >= 1 - c, xi >= 0, |c| <= 0 (zero weight cap):
    # variables (c, u, xi); u >= +-c, u <= 0 forces c = 0, so xi = 1.
    cons = (
        Constraint([1.0, 0.0, 1.0], GE, 1.0),    # c + xi >= 1
        Constraint([1.0, -1.0, 0.0], LE, 0.0),   # c - u <= 0
        Constraint([-1.0, -1.0, 0.0], LE, 0.0),  # -c - u <= 0
        Constraint([0.0, 1.0, 0.0], LE, 0.0),    # u <= 0
    )
    bounds = ((None, None), (0.0, None), (0.0, None))
    sol = solve(LinearProgram(np.array([0.0, 0.0, 1.0]), cons, bounds))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0)


def test_equality_constraint():
    sol = solve(LinearProgram(np.array([1.0, 1.0]),
                              (Constraint([1.0, 1.0], EQ, 2.0), Constraint([1.0, -1.0], EQ, 0.0))))
    assert sol.status == "optimal"
    assert sol.values == pytest.approx([1.0, 1.0])


def test_strong_duality_random_instances():
    # primal: min c.x st Ax >= b, x >= 0; dual: max b.y st A^T y <= c, y >= 0,
    # the dual built here by the test, both sides solved by the same entry point.
    rng = np.random.default_rng(42)
    for _ in range(8):
        nm, nn = rng.integers(2, 5), rng.integers(2, 5)
        A = rng.uniform(-1, 2, size=(nm, nn))
        x0 = rng.uniform(0, 2, size=nn)
        b = A @ x0 - rng.uniform(0, 1, size=nm)
        c = rng.uniform(0.1, 2, size=nn)
        primal = LinearProgram(
            c,
            tuple(Constraint(A[i], GE, float(b[i])) for i in range(nm)),
            tuple((0.0, None) for _ in range(nn)),
        )
        psol = solve(primal)
        assert psol.status == "optimal"
        dual = LinearProgram(
            -b,
            tuple(Constraint(A[:, j], LE, float(c[j])) for j in range(nn)),
            tuple((0.0, None) for _ in range(nm)),
        )
        dsol = solve(dual)
        assert dsol.status == "optimal"
        assert psol.objective_value == pytest.approx(-dsol.objective_value, abs=1e-6)


def test_row_permutation_same_objective():
    rng = np.random.default_rng(7)
    A = rng.uniform(-1, 2, size=(6, 4))
    x0 = rng.uniform(0, 1, size=4)
    b = A @ x0 - rng.uniform(0, 1, size=6)
    c = rng.uniform(0.1, 1, size=4)
    cons = [Constraint(A[i], GE, float(b[i])) for i in range(6)]
    bounds = tuple((0.0, None) for _ in range(4))
    base = solve(LinearProgram(c, tuple(cons), bounds))
    perm = solve(LinearProgram(c, tuple(cons[::-1]), bounds))
    assert base.status == perm.status == "optimal"
    assert base.objective_value == pytest.approx(perm.objective_value, abs=1e-7)


def test_same_input_is_deterministic():
    rng = np.random.default_rng(3)
    A = rng.uniform(-1, 2, size=(5, 3))
    b = A @ rng.uniform(0, 1, size=3) - 0.5
    program = LinearProgram(
        np.array([1.0, 2.0, 0.5]),
        tuple(Constraint(A[i], GE, float(b[i])) for i in range(5)),
        tuple((0.0, None) for _ in range(3)),
    )
    s1, s2 = solve(program), solve(program)
    assert np.array_equal(s1.values, s2.values)
    assert s1.objective_value == s2.objective_value


def test_check_feasible_and_dump():
    program = LinearProgram(np.array([1.0, 0.0]),
                            (Constraint([1.0, 1.0], LE, 1.0),),
                            ((0.0, None), (0.0, None)))
    assert check_feasible(program, [0.5, 0.5]) <= 1e-12
    assert check_feasible(program, [2.0, 0.0]) == pytest.approx(1.0)
    text = dump_lp(program)
    assert text.startswith("min 1.0 0.0\n")
    assert "<= 1.0" in text


def test_validation_errors():
    with pytest.raises(InputError):
        LinearProgram(np.array([]))
    with pytest.raises(InputError):
        Constraint([1.0], "!!", 0.0)
    with pytest.raises(InputError):
        LinearProgram(np.array([1.0]), (Constraint([1.0, 2.0], LE, 0.0),))
