"""Randomized problem instances for cross-validating the solver pipeline."""

from __future__ import annotations

import random
from typing import Tuple

from .model import CostParams, Instance, LinkSpec, MachineSpec, OnDemandSpec
from .scenarios import Scenario, ScenarioSet


def sample_problem(rng: random.Random,
                   max_machines: int = 6,
                   max_scenarios: int = 4,
                   max_demand: int = 40,
                   fidelity_range: Tuple[float, float] = (0.3, 1.0)):
    """Draw a small random (Instance, ScenarioSet) pair.

    Sizes stay within exhaustive-enumeration reach so the oracle can be
    used as ground truth.  Infeasible draws are intentional: status
    agreement between solvers is part of what gets validated.
    """
    n = rng.randint(1, max_machines)
    ids = tuple(f"m{i}" for i in range(n))
    machines = tuple(MachineSpec(mid, capacity_qubits=rng.randint(0, 30)) for mid in ids)
    links = tuple(LinkSpec(mid, bell_capacity=rng.randint(0, 20)) for mid in ids[1:])
    costs = CostParams(
        reserve_cost=float(rng.randint(0, 8000)),
        qubit_cost=float(rng.randint(1, 2000)),
        bell_pair_cost=float(rng.randint(0, 1000)),
        on_demand_cost=float(rng.randint(0, 30000)),
    )
    instance = Instance(
        machines=machines,
        hub_id=ids[0],
        links=links,
        costs=costs,
        on_demand=OnDemandSpec(
            capacity_qubits=rng.randint(1, 40),
            max_units=rng.randint(0, 3),
        ),
    )

    k = rng.randint(1, max_scenarios)
    weights = [rng.randint(1, 9) for _ in range(k)]
    total = sum(weights)
    flo, fhi = fidelity_range
    scenarios = tuple(
        Scenario(
            probability=w / total,
            demand_qubits=rng.randint(0, max_demand),
            availability={mid: rng.randint(0, 25) for mid in ids},
            fidelity=rng.uniform(flo, fhi),
        )
        for w in weights
    )
    return instance, ScenarioSet(scenarios=scenarios)
