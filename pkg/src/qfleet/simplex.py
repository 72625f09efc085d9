"""Two-phase primal simplex on a dense tableau with bounded variables.

Bland's smallest-index rule is used for both the entering and the leaving
choice (bound flips count as candidates under the entering variable's own
index), which makes the solver deterministic and cycle-free.  Dense numpy
arithmetic is plenty at the model sizes this package produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .formulation import (
    EQUAL,
    GREATER_EQUAL,
    INFEASIBLE,
    ITERATION_LIMIT,
    LESS_EQUAL,
    MilpModel,
    OPTIMAL,
    UNBOUNDED,
)

PREFER_FEWER_RESERVATIONS = "prefer-fewer-reservations"
TIEBREAK_NONE = "none"

_PIVOT_EPS = 1e-9
_TIE_EPS = 1e-9
_PHASE1_TOL = 1e-7
_REFRESH_EVERY = 32


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and limits shared by the LP and branch-and-bound solvers.

    ``max_simplex_iterations=None`` means 10 * (rows + columns) of the
    standard form, computed per solve.  ``tiebreak`` selects how objective
    ties (within 1e-6 absolute) are resolved by ``solve_milp``: prefer
    fewer reservations, then more on-demand units, or no preference.
    """

    integrality_tol: float = 1e-6
    feasibility_tol: float = 1e-9
    max_simplex_iterations: Optional[int] = None
    max_nodes: int = 1_000_000
    tiebreak: str = PREFER_FEWER_RESERVATIONS

    def __post_init__(self):
        if self.integrality_tol <= 0 or self.feasibility_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_simplex_iterations is not None and self.max_simplex_iterations < 1:
            raise ValueError("max_simplex_iterations must be at least 1")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.tiebreak not in (PREFER_FEWER_RESERVATIONS, TIEBREAK_NONE):
            raise ValueError(f"unknown tiebreak mode {self.tiebreak!r}")


@dataclass(frozen=True)
class LpSolution:
    status: str
    values: Tuple[float, ...]
    objective: float
    basis: Tuple[int, ...] = ()


def arrays_from_model(model: MilpModel):
    """Dense (c, A, senses, rhs, lower, upper, int_mask) view of a model."""
    n = model.num_variables
    m = model.num_constraints
    c = np.array([v.objective for v in model.variables], dtype=float)
    lower = np.array([v.lower for v in model.variables], dtype=float)
    upper = np.array(
        [math.inf if v.upper is None else v.upper for v in model.variables], dtype=float)
    int_mask = np.array([v.is_integer for v in model.variables], dtype=bool)
    A = np.zeros((m, n), dtype=float)
    rhs = np.zeros(m, dtype=float)
    senses = []
    for k, con in enumerate(model.constraints):
        for i, coef in con.coeffs.items():
            A[k, i] = coef
        rhs[k] = con.rhs
        senses.append(con.relation)
    return c, A, senses, rhs, lower, upper, int_mask


def solve_lp(model: MilpModel, options: Optional[SolveOptions] = None) -> LpSolution:
    """Solve the LP relaxation of ``model`` (integrality flags are ignored)."""
    opts = options or SolveOptions()
    c, A, senses, rhs, lower, upper, _ = arrays_from_model(model)
    status, x, basis, _ = solve_arrays(
        c, A, senses, rhs, lower, upper,
        feas_tol=opts.feasibility_tol, max_iter=opts.max_simplex_iterations)
    if status != OPTIMAL:
        return LpSolution(status=status, values=(), objective=math.inf)
    return LpSolution(
        status=OPTIMAL,
        values=tuple(float(v) for v in x),
        objective=float(c @ x),
        basis=tuple(int(b) for b in basis),
    )


def solve_arrays(c, A, senses, rhs, lower, upper, feas_tol=1e-9, max_iter=None):
    """min c.x subject to A x (senses) rhs and lower <= x <= upper.

    Lower bounds must be finite; upper bounds may be +inf.  Returns
    (status, x, basis, iterations).
    """
    m, n = A.shape
    if not np.all(np.isfinite(lower)):
        raise ValueError("lower bounds must be finite")
    span = upper - lower
    if np.any(span < -feas_tol):
        return INFEASIBLE, None, (), 0
    span = np.maximum(span, 0.0)

    b = rhs - A @ lower

    # slack columns for inequality rows
    slack_rows = [k for k, s in enumerate(senses) if s != EQUAL]
    n_slack = len(slack_rows)
    S = np.zeros((m, n_slack), dtype=float)
    slack_col_of_row = {}
    for j, k in enumerate(slack_rows):
        S[k, j] = 1.0 if senses[k] == LESS_EQUAL else -1.0
        slack_col_of_row[k] = n + j
    T = np.hstack([A.astype(float, copy=True), S])
    u = np.concatenate([span, np.full(n_slack, math.inf)])

    # make right-hand sides nonnegative
    neg = b < 0
    T[neg] *= -1.0
    b = np.where(neg, -b, b)

    # initial basis: a slack with +1 coefficient where available, else artificial
    basis = np.empty(m, dtype=int)
    art_rows = []
    for k in range(m):
        jcol = slack_col_of_row.get(k)
        if jcol is not None and T[k, jcol] > 0.5:
            basis[k] = jcol
        else:
            art_rows.append(k)
    n_art = len(art_rows)
    if n_art:
        Art = np.zeros((m, n_art), dtype=float)
        for j, k in enumerate(art_rows):
            Art[k, j] = 1.0
            basis[k] = T.shape[1] + j
        T = np.hstack([T, Art])
        u = np.concatenate([u, np.full(n_art, math.inf)])
    ncols = T.shape[1]
    art_start = ncols - n_art

    if max_iter is None:
        max_iter = 10 * (m + ncols)

    xB = b.astype(float, copy=True)
    at_upper = np.zeros(ncols, dtype=bool)
    in_basis = np.zeros(ncols, dtype=bool)
    in_basis[basis] = True
    iters = 0

    if n_art:
        costs1 = np.zeros(ncols)
        costs1[art_start:] = 1.0
        status, iters = _pivot_loop(
            T, xB, basis, at_upper, in_basis, u, costs1, feas_tol, max_iter, iters)
        if status != OPTIMAL:
            return status, None, (), iters
        residual = float(xB[basis >= art_start].sum())
        if residual > _PHASE1_TOL:
            return INFEASIBLE, None, (), iters
        # pin artificials at zero so they can never re-enter or grow
        u[art_start:] = 0.0

    costs2 = np.zeros(ncols)
    costs2[:n] = c
    status, iters = _pivot_loop(
        T, xB, basis, at_upper, in_basis, u, costs2, feas_tol, max_iter, iters)
    if status != OPTIMAL:
        return status, None, (), iters

    z = np.where(at_upper, np.where(np.isfinite(u), u, 0.0), 0.0)
    z[basis] = xB
    x = z[:n] + lower
    np.clip(x, lower, upper, out=x)
    return OPTIMAL, x, tuple(int(v) for v in basis), iters


def _pivot_loop(T, xB, basis, at_upper, in_basis, u, costs, feas_tol, max_iter, iters):
    m, ncols = T.shape
    zrow = costs - costs[basis] @ T
    since_refresh = 0
    enterable = u > _PIVOT_EPS
    while True:
        if iters >= max_iter:
            return ITERATION_LIMIT, iters
        iters += 1
        since_refresh += 1
        if since_refresh >= _REFRESH_EVERY:
            zrow = costs - costs[basis] @ T
            since_refresh = 0

        improving = np.where(at_upper, zrow > feas_tol, zrow < -feas_tol)
        cand = np.flatnonzero(improving & ~in_basis & enterable)
        if cand.size == 0:
            return OPTIMAL, iters
        j = int(cand[0])  # Bland: smallest improving index
        t = -1.0 if at_upper[j] else 1.0
        col = T[:, j].copy()
        a = t * col

        d = np.full(m, math.inf)
        dec = a > _PIVOT_EPS
        if dec.any():
            d[dec] = np.maximum(xB[dec], 0.0) / a[dec]
        inc = a < -_PIVOT_EPS
        if inc.any():
            room = u[basis[inc]] - xB[inc]
            d[inc] = np.maximum(room, 0.0) / (-a[inc])

        row_min = float(d.min()) if m else math.inf
        delta = min(row_min, float(u[j]))
        if not math.isfinite(delta):
            return UNBOUNDED, iters

        tie = delta + _TIE_EPS
        rows = np.flatnonzero(d <= tie)
        best_var = None
        best_row = -1
        for i in rows:  # Bland again: smallest leaving variable index
            bv = int(basis[i])
            if best_var is None or bv < best_var:
                best_var, best_row = bv, int(i)
        if u[j] <= tie and (best_var is None or j < best_var):
            # bound flip: the entering variable crosses to its other bound
            xB -= t * u[j] * col
            at_upper[j] = not at_upper[j]
            continue

        r = best_row
        enter_val = (u[j] if at_upper[j] else 0.0) + t * delta
        xB -= t * delta * col
        leaving = int(basis[r])
        at_upper[leaving] = a[r] < 0.0
        in_basis[leaving] = False

        piv = T[r, j]
        T[r] = T[r] / piv
        factor = T[:, j].copy()
        factor[r] = 0.0
        T -= np.outer(factor, T[r])
        zrow = zrow - zrow[j] * T[r]

        basis[r] = j
        in_basis[j] = True
        at_upper[j] = False
        xB[r] = enter_val
