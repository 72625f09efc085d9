"""Comparison models: expected-value formulation and random reservation.

Both baselines fix a first-stage decision by their own rule and are then
scored with optimal recourse under the true scenario distribution, which
makes the dominance of the stochastic optimum a structural guarantee.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .errors import AllInfeasibleError, InfeasibleError
from .formulation import INFEASIBLE, OPTIMAL, build_deterministic_equivalent, extract_plan
from .milp import solve_milp
from .model import Instance
from .oracle import evaluate_first_stage
from .scenarios import ScenarioSet, average_scenario
from .simplex import SolveOptions

BERNOULLI = "bernoulli"
UNIFORM_SIZE = "uniform-size"


@dataclass(frozen=True)
class BaselineResult:
    model: str
    expected_cost: float
    reserved: Optional[frozenset] = None
    deterministic_cost: Optional[float] = None
    mean: Optional[float] = None
    min_cost: Optional[float] = None
    max_cost: Optional[float] = None
    infeasible_trials: Optional[int] = None

    def to_json_dict(self) -> dict:
        out = {"model": self.model, "expected_cost": self.expected_cost}
        if self.deterministic_cost is not None:
            out["deterministic_cost"] = self.deterministic_cost
        if self.mean is not None:
            out["mean"] = self.mean
        if self.min_cost is not None:
            out["min"] = self.min_cost
        if self.max_cost is not None:
            out["max"] = self.max_cost
        if self.infeasible_trials is not None:
            out["infeasible_trials"] = self.infeasible_trials
        return out


def solve_evf(instance: Instance, scenarios: ScenarioSet,
              options: Optional[SolveOptions] = None) -> BaselineResult:
    """Optimize against the averaged scenario, then score against the truth."""
    averaged = ScenarioSet(scenarios=(average_scenario(scenarios),))
    model = build_deterministic_equivalent(instance, averaged)
    solution = solve_milp(model, options)
    if solution.status == INFEASIBLE:
        raise InfeasibleError("averaged deterministic model is infeasible")
    if solution.status != OPTIMAL:
        raise InfeasibleError(f"averaged model solve ended with {solution.status}")
    plan = extract_plan(model, solution)
    true_cost = evaluate_first_stage(instance, scenarios, plan.reserved)
    return BaselineResult(
        model="evf",
        expected_cost=true_cost,
        reserved=plan.reserved,
        deterministic_cost=solution.objective,
    )


def solve_random(instance: Instance, scenarios: ScenarioSet,
                 trials: int = 1000, seed: int = 0,
                 machine_probability: float = 0.5,
                 distribution: str = BERNOULLI) -> BaselineResult:
    """Score ``trials`` random reservation sets with optimal recourse.

    Each trial draws from its own stream derived from (seed, trial index),
    so the report does not depend on evaluation order.  Infeasible draws
    are counted and excluded from the mean.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if distribution not in (BERNOULLI, UNIFORM_SIZE):
        raise ValueError(f"unknown distribution {distribution!r}")
    ids = instance.machine_ids()
    costs = []
    infeasible = 0
    for t in range(trials):
        rng = random.Random(1_000_003 * seed + t)
        if distribution == BERNOULLI:
            reserved = frozenset(mid for mid in ids if rng.random() < machine_probability)
        else:
            reserved = frozenset(rng.sample(ids, rng.randint(0, len(ids))))
        try:
            costs.append(evaluate_first_stage(instance, scenarios, reserved))
        except InfeasibleError:
            infeasible += 1
    if not costs:
        raise AllInfeasibleError(f"all {trials} random draws were infeasible")
    mean = sum(costs) / len(costs)
    return BaselineResult(
        model="random",
        expected_cost=mean,
        mean=mean,
        min_cost=min(costs),
        max_cost=max(costs),
        infeasible_trials=infeasible,
    )


def perfect_information_bound(instance: Instance, scenarios: ScenarioSet,
                              options: Optional[SolveOptions] = None) -> float:
    """Expected cost under clairvoyance: each scenario optimized on its own.

    Reported for context only; no baseline comparison uses it.
    """
    from .scenarios import Scenario  # local alias for constructing singletons

    total = 0.0
    for scen in scenarios:
        if scen.probability <= 0.0:
            continue
        alone = ScenarioSet(scenarios=(Scenario(
            probability=1.0,
            demand_qubits=scen.demand_qubits,
            availability=scen.availability,
            fidelity=scen.fidelity,
        ),))
        model = build_deterministic_equivalent(instance, alone)
        solution = solve_milp(model, options)
        if solution.status != OPTIMAL:
            raise InfeasibleError(
                f"scenario with demand {scen.demand_qubits} is infeasible on its own")
        total += scen.probability * solution.objective
    return total
