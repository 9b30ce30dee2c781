"""Linear programming layer used by the learners and certification oracles.

The module owns the LP surface for the whole package: callers describe
programs with :class:`LinearProgram` and receive :class:`LpSolution` values.
Solving is delegated to scipy's HiGHS backend, which is deterministic for
identical input and enforces a primal feasibility tolerance of 1e-7 (its
default, matching the contract here).  Statuses map onto a fixed taxonomy:
``optimal``, ``infeasible``, ``unbounded``; anything else raises
:class:`SolverError` with the backend's message.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import InputError, SolverError

FEASIBILITY_TOL = 1e-7

LE, GE, EQ = "<=", ">=", "="


@dataclass(frozen=True)
class Constraint:
    coeffs: np.ndarray
    relation: str  # one of <=, >=, =
    bound: float

    def __post_init__(self):
        if self.relation not in (LE, GE, EQ):
            raise InputError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=np.float64))


@dataclass(frozen=True)
class LinearProgram:
    """Minimize objective . x subject to constraints and per-variable bounds.

    ``bounds[i]`` is a (lo, hi) pair with None meaning unbounded on that side;
    variables default to fully free.
    """

    objective: np.ndarray
    constraints: tuple[Constraint, ...] = ()
    bounds: tuple[tuple[float | None, float | None], ...] | None = None

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=np.float64)
        if obj.ndim != 1 or obj.size < 1:
            raise InputError("objective must be a nonempty vector")
        object.__setattr__(self, "objective", obj)
        for c in self.constraints:
            if c.coeffs.shape != obj.shape:
                raise InputError("constraint width does not match the variable count")
        if self.bounds is not None and len(self.bounds) != obj.size:
            raise InputError("bounds length does not match the variable count")

    @property
    def nvars(self) -> int:
        return int(self.objective.size)


@dataclass(frozen=True)
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    values: np.ndarray | None = field(default=None)
    objective_value: float | None = None


def solve(lp: LinearProgram) -> LpSolution:
    """Solve a linear program; deterministic for identical input."""
    rows_ub, rhs_ub, rows_eq, rhs_eq = [], [], [], []
    for c in lp.constraints:
        if c.relation == LE:
            rows_ub.append(c.coeffs)
            rhs_ub.append(c.bound)
        elif c.relation == GE:
            rows_ub.append(-c.coeffs)
            rhs_ub.append(-c.bound)
        else:
            rows_eq.append(c.coeffs)
            rhs_eq.append(c.bound)
    A_ub = np.vstack(rows_ub) if rows_ub else None
    A_eq = np.vstack(rows_eq) if rows_eq else None
    bounds = list(lp.bounds) if lp.bounds is not None else [(None, None)] * lp.nvars
    res = linprog(
        lp.objective,
        A_ub=A_ub,
        b_ub=np.asarray(rhs_ub) if rows_ub else None,
        A_eq=A_eq,
        b_eq=np.asarray(rhs_eq) if rows_eq else None,
        bounds=bounds,
        method="highs",
    )
    if res.status == 0:
        return LpSolution("optimal", np.asarray(res.x, dtype=np.float64), float(res.fun))
    if res.status == 2:
        return LpSolution("infeasible")
    if res.status == 3:
        return LpSolution("unbounded")
    raise SolverError(f"LP backend failed (status {res.status}): {res.message}; iterations={getattr(res, 'nit', '?')}")


def check_feasible(lp: LinearProgram, x: Sequence[float], tol: float = FEASIBILITY_TOL) -> float:
    """Worst constraint violation of an assignment (<= tol means feasible)."""
    x = np.asarray(x, dtype=np.float64)
    worst = 0.0
    for c in lp.constraints:
        lhs = float(c.coeffs @ x)
        if c.relation == LE:
            worst = max(worst, lhs - c.bound)
        elif c.relation == GE:
            worst = max(worst, c.bound - lhs)
        else:
            worst = max(worst, abs(lhs - c.bound))
    if lp.bounds is not None:
        for xi, (lo, hi) in zip(x, lp.bounds):
            if lo is not None:
                worst = max(worst, lo - xi)
            if hi is not None:
                worst = max(worst, xi - hi)
    return worst


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text dump: objective row, then one constraint per line, then bounds."""
    lines = ["min " + " ".join(repr(float(v)) for v in lp.objective)]
    for c in lp.constraints:
        lines.append(" ".join(repr(float(v)) for v in c.coeffs) + f" {c.relation} {c.bound!r}")
    if lp.bounds is not None:
        for i, (lo, hi) in enumerate(lp.bounds):
            lines.append(f"var x{i}: [{lo!r}, {hi!r}]")
    return "\n".join(lines) + "\n"
