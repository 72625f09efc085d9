"""Reference solvers used as ground truth and by the baselines.

Recourse for a fixed reservation is computed exactly.  Within one
scenario every usable source falls into one of two price classes:
integer-rate sources (the hub and on-demand capacity) cost the per-qubit
charge and cover demand one-for-one, while remote machines all share the
scenario fidelity as their rate and the per-qubit plus per-Bell-pair
charge as their price.  Enumerating the remote qubit count and filling
each class cheapest-first is therefore exact; no heuristic rounding is
involved.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import InfeasibleError, ScenarioInfeasibleError, TooLargeError
from .model import Instance, Plan, Recourse, zero_recourse
from .scenarios import Scenario, ScenarioSet

_EPS = 1e-9
MAX_EXHAUSTIVE_MACHINES = 16


def recourse_cost(instance: Instance, recourse: Recourse) -> float:
    c = instance.costs
    return (c.on_demand_cost * recourse.on_demand_units
            + c.qubit_cost * (sum(recourse.qubits_used.values()) + recourse.qubits_on_demand)
            + c.bell_pair_cost * sum(recourse.bell_pairs.values()))


def second_stage_optimal(instance: Instance, scenario: Scenario, reserved) -> Recourse:
    """Cheapest recourse covering the scenario demand with ``reserved`` fixed.

    Raises :class:`ScenarioInfeasibleError` when no deployment covers the
    demand.  At equal cost, more on-demand units and fewer remote qubits
    are preferred, matching the MILP tie-breaking.
    """
    reserved = frozenset(reserved)
    unknown = reserved - set(instance.machine_ids())
    if unknown:
        raise KeyError(f"reserved set contains unknown machines: {sorted(unknown)}")

    c = instance.costs
    od = instance.on_demand
    d = scenario.demand_qubits
    f = scenario.fidelity

    hub_cap = 0
    if instance.hub_id in reserved:
        hub = instance.machine(instance.hub_id)
        hub_cap = min(hub.capacity_qubits, scenario.availability[instance.hub_id])

    remotes = []  # (machine_id, usable qubits) in machine order
    for mid in instance.non_hub_ids():
        if mid in reserved:
            cap = min(instance.machine(mid).capacity_qubits,
                      scenario.availability[mid],
                      instance.link(mid).bell_capacity)
            if cap > 0:
                remotes.append((mid, cap))
    remote_total = sum(cap for _, cap in remotes)

    price_int = c.qubit_cost
    price_remote = c.qubit_cost + c.bell_pair_cost

    best = None  # (cost, -y, k, n)
    k_hi = min(remote_total, math.ceil(d / f)) if (f > 0 and d > 0) else 0
    ks = np.arange(k_hi + 1)
    need = np.ceil(d - f * ks - _EPS)
    need = np.maximum(need, 0).astype(int)
    remote_part = price_remote * ks
    for y in range(od.max_units + 1):
        int_cap = hub_cap + y * od.capacity_qubits
        feasible = need <= int_cap
        if not feasible.any():
            continue
        costs = np.where(feasible, remote_part + price_int * need, math.inf)
        pos = int(np.argmin(costs))  # first minimum: fewest remote qubits
        key = (float(costs[pos]) + c.on_demand_cost * y, -y, int(ks[pos]))
        if best is None or key < best:
            best = key
    if best is None:
        raise ScenarioInfeasibleError(
            f"demand {d} cannot be covered with reservation {sorted(reserved)}")

    _, neg_y, k = best
    y = -neg_y
    n = int(max(0, math.ceil(d - f * k - _EPS)))

    qubits = {m.id: 0 for m in instance.machines}
    bells = {mid: 0 for mid in instance.non_hub_ids()}
    rest = k
    for mid, cap in remotes:
        take = min(cap, rest)
        qubits[mid] = take
        bells[mid] = take
        rest -= take
    hub_used = min(hub_cap, n)
    if instance.hub_id in qubits and hub_used:
        qubits[instance.hub_id] = hub_used
    return Recourse(
        on_demand_units=y,
        qubits_used=qubits,
        qubits_on_demand=n - hub_used,
        bell_pairs=bells,
    )


def _stage_costs(instance: Instance, scenarios: ScenarioSet, reserved):
    """Expected cost, per-scenario recourse, and total on-demand units.

    Zero-probability scenarios contribute nothing and get zero recourse;
    an infeasible positive-probability scenario raises InfeasibleError.
    """
    reserved = frozenset(reserved)
    total = instance.costs.reserve_cost * len(reserved)
    recourse = []
    units = 0
    for scen in scenarios:
        if scen.probability <= 0.0:
            recourse.append(zero_recourse(instance))
            continue
        try:
            rec = second_stage_optimal(instance, scen, reserved)
        except ScenarioInfeasibleError as exc:
            raise InfeasibleError(str(exc)) from exc
        recourse.append(rec)
        units += rec.on_demand_units
        total += scen.probability * recourse_cost(instance, rec)
    return float(total), tuple(recourse), units


def evaluate_first_stage(instance: Instance, scenarios: ScenarioSet, reserved) -> float:
    """Reservation cost plus expected optimal recourse for a fixed first stage."""
    total, _, _ = _stage_costs(instance, scenarios, reserved)
    return total


def build_first_stage_plan(instance: Instance, scenarios: ScenarioSet, reserved) -> Plan:
    total, recourse, _ = _stage_costs(instance, scenarios, reserved)
    return Plan(reserved=frozenset(reserved), recourse=recourse, objective=total)


def solve_exhaustive(instance: Instance, scenarios: ScenarioSet) -> Plan:
    """Enumerate every reservation subset; ground truth for small fleets.

    Uses the same tie rules as ``solve_milp``: among subsets within 1e-6 of
    the cheapest, fewest reservations win, then the most on-demand units.
    """
    ids = instance.machine_ids()
    if len(ids) > MAX_EXHAUSTIVE_MACHINES:
        raise TooLargeError(
            f"{len(ids)} machines exceed the 2^{MAX_EXHAUSTIVE_MACHINES} enumeration limit")

    evaluated = []  # (cost, size, -units, order, reserved, recourse)
    order = 0
    for size in range(len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            try:
                cost, recourse, units = _stage_costs(instance, scenarios, combo)
            except InfeasibleError:
                continue
            evaluated.append((cost, size, -units, order, frozenset(combo), recourse))
            order += 1
    if not evaluated:
        raise InfeasibleError("no reservation subset admits feasible recourse")

    best_cost = min(e[0] for e in evaluated)
    tied = [e for e in evaluated if e[0] <= best_cost + 1e-6]
    cost, _, _, _, reserved, recourse = min(tied, key=lambda e: e[1:4])
    return Plan(reserved=reserved, recourse=recourse, objective=cost)
