"""Probability-weighted scenarios for the three uncertainty sources.

A scenario fixes the task demand (qubits), the per-machine qubit
availability, and the entanglement fidelity used as the efficiency
factor for remote contributions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

from .errors import BadBoundsError, BadProbabilityError
from .model import PAPER_MACHINE_IDS

PAPER_DEMAND = 10
PAPER_AVAILABILITY = 127
PAPER_P1 = 0.8


@dataclass(frozen=True)
class Scenario:
    probability: float
    demand_qubits: int
    availability: Mapping[str, int]
    fidelity: float


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: Tuple[Scenario, ...]

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))

    def __iter__(self):
        return iter(self.scenarios)

    def __len__(self):
        return len(self.scenarios)

    def __getitem__(self, index):
        return self.scenarios[index]

    def total_probability(self) -> float:
        return sum(s.probability for s in self.scenarios)

    def max_demand(self) -> int:
        return max(s.demand_qubits for s in self.scenarios)


def make_paper_scenarios(p1: float, machine_ids: Sequence[str] = PAPER_MACHINE_IDS) -> ScenarioSet:
    """Two-point uncertainty of the case study.

    Scenario 1 (probability ``p1``): demand 10, every machine offers 127
    qubits, fidelity 1.  Scenario 2 (probability ``1 - p1``): no demand, no
    availability, zero fidelity, hence zero recourse cost.
    """
    if not (0.0 <= p1 <= 1.0):
        raise BadProbabilityError(f"p1 must lie in [0, 1], got {p1}")
    ids = tuple(machine_ids)
    busy = Scenario(
        probability=p1,
        demand_qubits=PAPER_DEMAND,
        availability={mid: PAPER_AVAILABILITY for mid in ids},
        fidelity=1.0,
    )
    idle = Scenario(
        probability=1.0 - p1,
        demand_qubits=0,
        availability={mid: 0 for mid in ids},
        fidelity=0.0,
    )
    return ScenarioSet(scenarios=(busy, idle))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def average_scenario(scenarios: ScenarioSet) -> Scenario:
    """Probability-weighted mean scenario with integer parts rounded half-up."""
    ids: Tuple[str, ...] = ()
    for s in scenarios:
        for mid in s.availability:
            if mid not in ids:
                ids += (mid,)
    demand = sum(s.probability * s.demand_qubits for s in scenarios)
    fidelity = sum(s.probability * s.fidelity for s in scenarios)
    availability = {
        mid: _round_half_up(sum(s.probability * s.availability.get(mid, 0) for s in scenarios))
        for mid in ids
    }
    return Scenario(
        probability=1.0,
        demand_qubits=_round_half_up(demand),
        availability=availability,
        fidelity=fidelity,
    )


@dataclass(frozen=True)
class ScenarioBounds:
    """Inclusive uniform sampling ranges for :func:`sample_scenarios`."""

    machine_ids: Tuple[str, ...]
    demand: Tuple[int, int] = (0, 40)
    availability: Tuple[int, int] = (0, 127)
    fidelity: Tuple[float, float] = (0.0, 1.0)


def sample_scenarios(bounds: ScenarioBounds, n: int, seed: int) -> ScenarioSet:
    """Draw ``n`` equiprobable scenarios from a deterministic seeded stream."""
    if n < 1:
        raise BadBoundsError(f"need at least one scenario, got n={n}")
    for label, (lo, hi) in (("demand", bounds.demand), ("availability", bounds.availability)):
        if lo < 0 or hi < lo:
            raise BadBoundsError(f"bad {label} bounds ({lo}, {hi})")
    flo, fhi = bounds.fidelity
    if not (0.0 <= flo <= fhi <= 1.0):
        raise BadBoundsError(f"bad fidelity bounds ({flo}, {fhi})")

    rng = random.Random(seed)
    prob = 1.0 / n
    out = []
    for _ in range(n):
        out.append(Scenario(
            probability=prob,
            demand_qubits=rng.randint(*bounds.demand),
            availability={mid: rng.randint(*bounds.availability) for mid in bounds.machine_ids},
            fidelity=rng.uniform(flo, fhi),
        ))
    return ScenarioSet(scenarios=tuple(out))
