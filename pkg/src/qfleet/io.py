"""JSON input and output for instances, scenarios, and plans.

Missing optional fields fall back to the case-study defaults: a ten
machine fleet, costs 5000/1000/450/25000, capacity 257, on-demand
capacity 127.
"""

from __future__ import annotations

import json
from typing import Optional, Tuple

from .errors import ParseError, ValidationFailedError
from .model import (
    CostParams,
    DEFAULT_BELL_CAPACITY,
    DEFAULT_MACHINE_CAPACITY,
    DEFAULT_ON_DEMAND_CAPACITY,
    Instance,
    LinkSpec,
    MachineSpec,
    OnDemandSpec,
    Plan,
    default_max_units,
    paper_instance,
    validate_instance,
)
from .scenarios import PAPER_DEMAND, Scenario, ScenarioSet

_COST_KEYS = {
    "reserve": "reserve_cost",
    "per_qubit": "qubit_cost",
    "per_bell_pair": "bell_pair_cost",
    "on_demand_deploy": "on_demand_cost",
}


def load_instance(path) -> Tuple[Instance, Optional[ScenarioSet]]:
    """Parse and validate an instance file, with optional embedded scenarios."""
    with open(path, "rb") as handle:
        raw = handle.read()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: malformed JSON at byte offset {exc.pos}: {exc.msg}",
            path=str(path), offset=exc.pos) from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object", path=str(path))

    scenarios = None
    if "scenarios" in data:
        scenarios = scenario_set_from_json_dict(data)
    instance = instance_from_json_dict(data, scenarios=scenarios)

    report = validate_instance(instance, scenarios)
    if not report.ok:
        raise ValidationFailedError(report.violations)
    return instance, scenarios


def instance_from_json_dict(data: dict, scenarios: Optional[ScenarioSet] = None) -> Instance:
    if "machines" in data:
        machines = []
        for k, entry in enumerate(_expect(data, "machines", list)):
            if not isinstance(entry, dict) or "id" not in entry:
                raise ValidationFailedError([f"machines[{k}].id is missing"])
            machines.append(MachineSpec(
                id=str(entry["id"]),
                capacity_qubits=int(entry.get("capacity_qubits", DEFAULT_MACHINE_CAPACITY)),
            ))
        machines = tuple(machines)
    else:
        machines = paper_instance().machines

    hub_id = str(data.get("hub_id", machines[0].id if machines else ""))

    if "links" in data:
        links = []
        for k, entry in enumerate(_expect(data, "links", list)):
            if not isinstance(entry, dict) or "machine_id" not in entry:
                raise ValidationFailedError([f"links[{k}].machine_id is missing"])
            links.append(LinkSpec(
                machine_id=str(entry["machine_id"]),
                bell_capacity=int(entry.get("bell_capacity", DEFAULT_BELL_CAPACITY)),
            ))
        links = tuple(links)
    else:
        links = tuple(LinkSpec(m.id, DEFAULT_BELL_CAPACITY)
                      for m in machines if m.id != hub_id)

    cost_kwargs = {}
    for json_key, field_name in _COST_KEYS.items():
        if "costs" in data and json_key in _expect(data, "costs", dict):
            cost_kwargs[field_name] = float(data["costs"][json_key])
    costs = CostParams(**cost_kwargs)

    od_data = _expect(data, "on_demand", dict) if "on_demand" in data else {}
    od_capacity = int(od_data.get("capacity_qubits", DEFAULT_ON_DEMAND_CAPACITY))
    if "max_units" in od_data:
        max_units = int(od_data["max_units"])
    else:
        peak = scenarios.max_demand() if scenarios is not None else PAPER_DEMAND
        max_units = default_max_units(peak, od_capacity)

    return Instance(
        machines=machines,
        hub_id=hub_id,
        links=links,
        costs=costs,
        on_demand=OnDemandSpec(capacity_qubits=od_capacity, max_units=max_units),
    )


def scenario_set_from_json_dict(data: dict) -> ScenarioSet:
    entries = _expect(data, "scenarios", list)
    scenarios = []
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ValidationFailedError([f"scenarios[{k}] must be an object"])
        try:
            scenarios.append(Scenario(
                probability=float(entry["probability"]),
                demand_qubits=int(entry["demand_qubits"]),
                availability={str(mid): int(v)
                              for mid, v in entry.get("availability", {}).items()},
                fidelity=float(entry["fidelity"]),
            ))
        except KeyError as exc:
            raise ValidationFailedError(
                [f"scenarios[{k}].{exc.args[0]} is missing"]) from exc
    return ScenarioSet(scenarios=tuple(scenarios))


def instance_to_json_dict(instance: Instance) -> dict:
    return {
        "machines": [{"id": m.id, "capacity_qubits": m.capacity_qubits}
                     for m in instance.machines],
        "hub_id": instance.hub_id,
        "links": [{"machine_id": ln.machine_id, "bell_capacity": ln.bell_capacity}
                  for ln in instance.links],
        "costs": {
            "reserve": instance.costs.reserve_cost,
            "per_qubit": instance.costs.qubit_cost,
            "per_bell_pair": instance.costs.bell_pair_cost,
            "on_demand_deploy": instance.costs.on_demand_cost,
        },
        "on_demand": {
            "capacity_qubits": instance.on_demand.capacity_qubits,
            "max_units": instance.on_demand.max_units,
        },
    }


def scenario_set_to_json_dict(scenarios: ScenarioSet) -> dict:
    return {
        "scenarios": [
            {
                "probability": s.probability,
                "demand_qubits": s.demand_qubits,
                "availability": dict(s.availability),
                "fidelity": s.fidelity,
            }
            for s in scenarios
        ]
    }


def plan_to_json_dict(plan: Plan, instance: Instance) -> dict:
    ids = instance.machine_ids()
    return {
        "reserved": [mid for mid in ids if mid in plan.reserved],
        "recourse": [
            {
                "scenario": k,
                "on_demand_units": rec.on_demand_units,
                "qubits_used": {mid: rec.qubits_used.get(mid, 0) for mid in ids},
                "qubits_on_demand": rec.qubits_on_demand,
                "bell_pairs": {mid: rec.bell_pairs.get(mid, 0)
                               for mid in instance.non_hub_ids()},
            }
            for k, rec in enumerate(plan.recourse)
        ],
        "objective": plan.objective,
    }


def _expect(data: dict, key: str, kind):
    value = data[key]
    if not isinstance(value, kind):
        raise ValidationFailedError([f"{key} must be a {kind.__name__}"])
    return value
