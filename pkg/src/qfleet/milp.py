"""Best-bound branch-and-bound on the LP relaxation.

Branching is on the most fractional integral variable.  Objective ties
(within 1e-6 absolute) are resolved by a second lexicographic pass that
minimizes the number of reservations and, among those, maximizes the
total number of on-demand units, so on-demand wins at cost ties.
"""

from __future__ import annotations

import heapq
import math
from typing import Optional

import numpy as np

from .errors import UnboundedModelError
from .formulation import (
    GREATER_EQUAL,
    INFEASIBLE,
    ITERATION_LIMIT,
    LESS_EQUAL,
    MilpModel,
    MilpSolution,
    NODE_LIMIT,
    OPTIMAL,
    ROLE_RESERVE,
    ROLE_UNITS,
    UNBOUNDED,
)
from .simplex import (
    PREFER_FEWER_RESERVATIONS,
    SolveOptions,
    TIEBREAK_NONE,
    arrays_from_model,
    solve_arrays,
)

TIE_EPS = 1e-6
_BOUND_EPS = 1e-9


def solve_milp(model: MilpModel, options: Optional[SolveOptions] = None) -> MilpSolution:
    opts = options or SolveOptions()
    c, A, senses, rhs, lower, upper, int_mask = arrays_from_model(model)
    int_idx = np.flatnonzero(int_mask)
    if int_idx.size and not (np.all(np.isfinite(lower[int_idx]))
                             and np.all(np.isfinite(upper[int_idx]))):
        raise ValueError("all integral variables must carry finite bounds")

    priority = np.zeros(c.shape[0])
    if model.index_map is not None:
        # fixed-cost variables first: their LP smear is what branching must
        # resolve before the per-scenario quantity bounds become tight
        priority[model.index_map.indices(ROLE_RESERVE)] = 2.0
        priority[model.index_map.indices(ROLE_UNITS)] = 1.0

    status, vals, nodes = _branch_and_bound(
        c, A, senses, rhs, lower, upper, int_idx, opts, priority=priority)
    if status != OPTIMAL:
        return MilpSolution(
            status=status,
            values=tuple(vals) if vals is not None else (),
            objective=float(c @ vals) if vals is not None else math.inf,
            nodes=nodes,
        )

    if opts.tiebreak != TIEBREAK_NONE and model.index_map is not None:
        reserve_idx = model.index_map.indices(ROLE_RESERVE)
        unit_idx = model.index_map.indices(ROLE_UNITS)
        if reserve_idx or unit_idx:
            vals, status, extra = _tiebreak_pass(
                c, A, senses, rhs, lower, upper, int_idx, opts,
                vals, reserve_idx, unit_idx, priority)
            nodes += extra
            if status != OPTIMAL:
                return MilpSolution(
                    status=status, values=tuple(vals), objective=float(c @ vals),
                    nodes=nodes)

    return MilpSolution(
        status=OPTIMAL,
        values=tuple(float(v) for v in vals),
        objective=float(c @ vals),
        nodes=nodes,
    )


def _tiebreak_pass(c, A, senses, rhs, lower, upper, int_idx, opts,
                   vals, reserve_idx, unit_idx, priority):
    """Among solutions within TIE_EPS of the optimum, pick the lexicographic
    (fewest reservations, most on-demand units) one.

    The composite objective is exact: reservation counts are integers and the
    unit term is scaled below 1, so no weighting ambiguity arises.
    """
    best_obj = float(c @ vals)
    c2 = np.zeros_like(c)
    c2[reserve_idx] = 1.0
    if unit_idx:
        gamma = 0.5 / (float(np.sum(upper[unit_idx])) + 1.0)
        c2[unit_idx] = -gamma
    A2 = np.vstack([A, c])
    senses2 = list(senses) + [LESS_EQUAL]
    rhs2 = np.append(rhs, best_obj + TIE_EPS)
    incumbent = (np.asarray(vals, dtype=float), float(c2 @ vals))
    status, vals2, nodes = _branch_and_bound(
        c2, A2, senses2, rhs2, lower, upper, int_idx, opts,
        incumbent=incumbent, priority=priority)
    if status == OPTIMAL:
        return vals2, OPTIMAL, nodes
    return (vals2 if vals2 is not None else vals), status, nodes


def _branch_and_bound(c, A, senses, rhs, lower, upper, int_idx, opts,
                      incumbent=None, priority=None):
    """Returns (status, values, lp_count).  ``values`` is the best incumbent."""
    best_vals, best_obj = (None, math.inf) if incumbent is None else incumbent
    if priority is None:
        priority = np.zeros(c.shape[0])
    nodes = 0
    seq = 0
    heap = []

    def relax(lo, hi):
        return solve_arrays(c, A, senses, rhs, lo, hi,
                            feas_tol=opts.feasibility_tol,
                            max_iter=opts.max_simplex_iterations)

    def offer(vals, obj, lo, hi, depth):
        """Either records an integral incumbent or queues a fractional node."""
        nonlocal best_vals, best_obj, seq
        j = _branch_variable(vals, int_idx, opts.integrality_tol, priority)
        if j is None:
            cand = vals.copy()
            if int_idx.size:
                cand[int_idx] = np.round(cand[int_idx])
                if not _rows_satisfied(A, senses, rhs, cand, 1e-7):
                    cand = vals  # keep the raw LP point if rounding broke a row
            cobj = float(c @ cand)
            if cobj < best_obj - 1e-12:
                best_obj, best_vals = cobj, cand
        else:
            seq += 1
            # best bound first; among equal bounds dive deepest-first so a
            # plateau of ties collapses as soon as one incumbent lands
            heapq.heappush(heap, (obj, -depth, seq, lo, hi, vals, j))

    nodes += 1
    status, vals, _, _ = relax(lower, upper)
    if status == UNBOUNDED:
        raise UnboundedModelError("LP relaxation is unbounded below")
    if status == ITERATION_LIMIT:
        return ITERATION_LIMIT, best_vals, nodes
    if status == INFEASIBLE:
        return INFEASIBLE, best_vals, nodes
    offer(vals, float(c @ vals), lower, upper, 0)

    while heap:
        bound, neg_depth, _, lo, hi, vals, j = heapq.heappop(heap)
        if bound >= best_obj - _BOUND_EPS:
            break  # best-bound order: everything left is no better
        down_hi = hi.copy()
        down_hi[j] = math.floor(vals[j])
        up_lo = lo.copy()
        up_lo[j] = math.ceil(vals[j])
        for lo2, hi2 in ((lo, down_hi), (up_lo, hi)):
            if lo2[j] > hi2[j] + _BOUND_EPS:
                continue
            if nodes >= opts.max_nodes:
                return NODE_LIMIT, best_vals, nodes
            nodes += 1
            status, v2, _, _ = relax(lo2, hi2)
            if status == INFEASIBLE:
                continue
            if status == ITERATION_LIMIT:
                return ITERATION_LIMIT, best_vals, nodes
            if status == UNBOUNDED:
                raise UnboundedModelError("LP relaxation is unbounded below")
            obj2 = float(c @ v2)
            if obj2 >= best_obj - _BOUND_EPS:
                continue
            offer(v2, obj2, lo2, hi2, 1 - neg_depth)

    if best_vals is None:
        return INFEASIBLE, None, nodes
    return OPTIMAL, best_vals, nodes


def _branch_variable(vals, int_idx, tol, priority):
    """Most fractional integral variable within the highest fractional
    priority class; the first index wins remaining ties."""
    if not int_idx.size:
        return None
    sub = vals[int_idx]
    frac = np.abs(sub - np.round(sub))
    fractional = frac > tol
    if not fractional.any():
        return None
    # priority steps are whole numbers and frac < 1, so the sum orders
    # first by class and then by fractionality
    score = np.where(fractional, 2.0 * priority[int_idx] + frac, -1.0)
    return int(int_idx[int(np.argmax(score))])


def _rows_satisfied(A, senses, rhs, vals, tol):
    lhs = A @ vals
    for k, sense in enumerate(senses):
        if sense == LESS_EQUAL:
            if lhs[k] > rhs[k] + tol:
                return False
        elif sense == GREATER_EQUAL:
            if lhs[k] < rhs[k] - tol:
                return False
        else:
            if abs(lhs[k] - rhs[k]) > tol:
                return False
    return True
