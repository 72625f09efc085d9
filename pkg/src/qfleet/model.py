"""Domain types for the quantum fleet allocation problem.

An :class:`Instance` describes a fixed fleet of quantum machines, the hub
site that anchors computation tasks, the teleportation links from every
remote machine to the hub, and the cost structure.  A :class:`Plan`
records a first-stage reservation plus per-scenario recourse and can be
re-costed independently of any solver.

Conventions baked into the cost model:

* the hub machine contributes qubits one-for-one; remote machines
  contribute at the scenario's fidelity factor and consume exactly one
  Bell pair per teleported qubit;
* on-demand machines are installed at the hub site, so they contribute
  one-for-one and consume no Bell pairs;
* the per-qubit charge applies to qubits used on reserved and on-demand
  machines alike, while the on-demand charge is a per-unit deployment fee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence, Tuple

from .errors import StructureMismatchError

MONEY_TOL = 1e-6
PROB_TOL = 1e-9

DEFAULT_RESERVE_COST = 5000.0
DEFAULT_QUBIT_COST = 1000.0
DEFAULT_BELL_PAIR_COST = 450.0
DEFAULT_ON_DEMAND_COST = 25000.0
DEFAULT_MACHINE_CAPACITY = 257
DEFAULT_ON_DEMAND_CAPACITY = 127
DEFAULT_BELL_CAPACITY = 127
DEFAULT_FLEET_SIZE = 10

PAPER_MACHINE_IDS: Tuple[str, ...] = tuple(f"qc{i}" for i in range(DEFAULT_FLEET_SIZE))


@dataclass(frozen=True)
class CostParams:
    """Unit costs of the four billable quantities (normalized money)."""

    reserve_cost: float = DEFAULT_RESERVE_COST
    qubit_cost: float = DEFAULT_QUBIT_COST
    bell_pair_cost: float = DEFAULT_BELL_PAIR_COST
    on_demand_cost: float = DEFAULT_ON_DEMAND_COST

    def scaled(self, factor: float) -> "CostParams":
        return CostParams(
            reserve_cost=self.reserve_cost * factor,
            qubit_cost=self.qubit_cost * factor,
            bell_pair_cost=self.bell_pair_cost * factor,
            on_demand_cost=self.on_demand_cost * factor,
        )


@dataclass(frozen=True)
class MachineSpec:
    id: str
    capacity_qubits: int = DEFAULT_MACHINE_CAPACITY


@dataclass(frozen=True)
class LinkSpec:
    """Teleportation link from a non-hub machine to the hub (static capacity)."""

    machine_id: str
    bell_capacity: int = DEFAULT_BELL_CAPACITY


@dataclass(frozen=True)
class OnDemandSpec:
    """Per-unit size and deployment cap of on-demand machines."""

    capacity_qubits: int = DEFAULT_ON_DEMAND_CAPACITY
    max_units: int = 2


def default_max_units(max_demand: int, capacity_qubits: int) -> int:
    """Deployment cap that always leaves one spare unit beyond peak demand."""
    if capacity_qubits <= 0:
        return 0
    return math.ceil(max_demand / capacity_qubits) + 1


@dataclass(frozen=True)
class Instance:
    machines: Tuple[MachineSpec, ...]
    hub_id: str
    links: Tuple[LinkSpec, ...]
    costs: CostParams
    on_demand: OnDemandSpec

    def __post_init__(self):
        object.__setattr__(self, "machines", tuple(self.machines))
        object.__setattr__(self, "links", tuple(self.links))

    def machine_ids(self) -> Tuple[str, ...]:
        return tuple(m.id for m in self.machines)

    def non_hub_ids(self) -> Tuple[str, ...]:
        return tuple(m.id for m in self.machines if m.id != self.hub_id)

    def machine(self, machine_id: str) -> MachineSpec:
        for m in self.machines:
            if m.id == machine_id:
                return m
        raise KeyError(machine_id)

    def link(self, machine_id: str) -> LinkSpec:
        for ln in self.links:
            if ln.machine_id == machine_id:
                return ln
        raise KeyError(machine_id)

    def with_on_demand_cost(self, value: float) -> "Instance":
        return replace(self, costs=replace(self.costs, on_demand_cost=value))


@dataclass(frozen=True)
class Recourse:
    """Second-stage decisions for one scenario."""

    on_demand_units: int
    qubits_used: Mapping[str, int]
    qubits_on_demand: int
    bell_pairs: Mapping[str, int]


@dataclass(frozen=True)
class Plan:
    """First-stage reservation plus one recourse record per scenario."""

    reserved: frozenset
    recourse: Tuple[Recourse, ...]
    objective: float

    def __post_init__(self):
        object.__setattr__(self, "reserved", frozenset(self.reserved))
        object.__setattr__(self, "recourse", tuple(self.recourse))


def zero_recourse(instance: Instance) -> Recourse:
    return Recourse(
        on_demand_units=0,
        qubits_used={m.id: 0 for m in instance.machines},
        qubits_on_demand=0,
        bell_pairs={mid: 0 for mid in instance.non_hub_ids()},
    )


def empty_plan(instance: Instance, scenarios) -> Plan:
    """All-zero plan matching the shapes of ``instance`` and ``scenarios``."""
    return Plan(
        reserved=frozenset(),
        recourse=tuple(zero_recourse(instance) for _ in scenarios),
        objective=0.0,
    )


def paper_instance(
    num_machines: int = DEFAULT_FLEET_SIZE,
    bell_capacity: int = DEFAULT_BELL_CAPACITY,
    costs: Optional[CostParams] = None,
    max_units: int = 2,
) -> Instance:
    """The default case-study fleet: identical machines, first one is the hub."""
    ids = tuple(f"qc{i}" for i in range(num_machines))
    return Instance(
        machines=tuple(MachineSpec(mid) for mid in ids),
        hub_id=ids[0],
        links=tuple(LinkSpec(mid, bell_capacity) for mid in ids[1:]),
        costs=costs or CostParams(),
        on_demand=OnDemandSpec(max_units=max_units),
    )


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(instance: Instance, scenarios=None) -> ValidationReport:
    """Collect every structural violation; an empty report means usable inputs.

    ``scenarios`` may be omitted to validate the instance alone.
    """
    v = []
    ids = [m.id for m in instance.machines]
    if not ids:
        v.append("at least one machine is required")
    seen = set()
    for mid in ids:
        if mid in seen:
            v.append(f"duplicate machine id '{mid}'")
        seen.add(mid)
    if ids and instance.hub_id not in seen:
        v.append(f"hub_id '{instance.hub_id}' does not refer to an existing machine")

    for m in instance.machines:
        if m.capacity_qubits < 0:
            v.append(f"machine '{m.id}' has negative capacity {m.capacity_qubits}")

    linked = set()
    for ln in instance.links:
        if ln.machine_id not in seen:
            v.append(f"link references unknown machine '{ln.machine_id}'")
        elif ln.machine_id == instance.hub_id:
            v.append(f"link present for hub machine '{ln.machine_id}'")
        if ln.machine_id in linked:
            v.append(f"duplicate link for machine '{ln.machine_id}'")
        linked.add(ln.machine_id)
        if ln.bell_capacity < 0:
            v.append(f"link '{ln.machine_id}' has negative Bell capacity {ln.bell_capacity}")
    for mid in ids:
        if mid != instance.hub_id and mid not in linked:
            v.append(f"missing link for machine '{mid}'")

    c = instance.costs
    for label, value in (
        ("reserve_cost", c.reserve_cost),
        ("qubit_cost", c.qubit_cost),
        ("bell_pair_cost", c.bell_pair_cost),
        ("on_demand_cost", c.on_demand_cost),
    ):
        if value < 0:
            v.append(f"{label} is negative ({value})")
    if instance.on_demand.capacity_qubits < 0:
        v.append(f"on-demand capacity is negative ({instance.on_demand.capacity_qubits})")
    if instance.on_demand.max_units < 0:
        v.append(f"on-demand max_units is negative ({instance.on_demand.max_units})")

    if scenarios is not None:
        scen_list = list(scenarios)
        if not scen_list:
            v.append("scenario set is empty")
        total = 0.0
        for k, s in enumerate(scen_list):
            total += s.probability
            if not (0.0 <= s.probability <= 1.0):
                v.append(f"scenario {k} probability {s.probability} outside [0, 1]")
            if s.demand_qubits < 0:
                v.append(f"scenario {k} demand is negative ({s.demand_qubits})")
            if not (0.0 <= s.fidelity <= 1.0):
                v.append(f"scenario {k} fidelity {s.fidelity} outside [0, 1]")
            if set(s.availability) != seen:
                v.append(f"scenario {k} availability vector mismatched: "
                         f"{len(s.availability)} entries for {len(seen)} machines")
            for mid, avail in s.availability.items():
                if avail < 0:
                    v.append(f"scenario {k} availability of '{mid}' is negative ({avail})")
        if scen_list and abs(total - 1.0) > PROB_TOL:
            v.append(f"probabilities sum to {total:g} != 1")

    return ValidationReport(violations=tuple(v))


def _check_structure(instance: Instance, scenarios, plan: Plan) -> None:
    ids = set(instance.machine_ids())
    non_hub = set(instance.non_hub_ids())
    if not plan.reserved <= ids:
        raise StructureMismatchError(
            f"reserved set contains unknown machines: {sorted(plan.reserved - ids)}")
    scen_list = list(scenarios)
    if len(plan.recourse) != len(scen_list):
        raise StructureMismatchError(
            f"plan has {len(plan.recourse)} recourse records for {len(scen_list)} scenarios")
    for k, rec in enumerate(plan.recourse):
        if not set(rec.qubits_used) <= ids:
            raise StructureMismatchError(f"recourse {k} uses unknown machines")
        if not set(rec.bell_pairs) <= non_hub:
            raise StructureMismatchError(f"recourse {k} has Bell pairs on non-link machines")


def cost_components(instance: Instance, scenarios, plan: Plan):
    """Decompose a plan's cost into (reservation, on-demand, qubit, Bell) parts."""
    _check_structure(instance, scenarios, plan)
    c = instance.costs
    reservation = c.reserve_cost * len(plan.reserved)
    on_demand = 0.0
    qubits = 0.0
    bells = 0.0
    for scen, rec in zip(scenarios, plan.recourse):
        p = scen.probability
        on_demand += p * c.on_demand_cost * rec.on_demand_units
        qubits += p * c.qubit_cost * (sum(rec.qubits_used.values()) + rec.qubits_on_demand)
        bells += p * c.bell_pair_cost * sum(rec.bell_pairs.values())
    return reservation, on_demand, qubits, bells


def cost_of_plan(instance: Instance, scenarios, plan: Plan) -> float:
    """Recompute a plan's total expected cost.  Pure arithmetic, no optimization."""
    return float(sum(cost_components(instance, scenarios, plan)))
