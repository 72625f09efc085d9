"""Deterministic equivalent of the two-stage reservation program.

Variables per model: one binary reservation flag per machine, then per
scenario one on-demand unit count, per-machine qubit usage, on-demand
qubit usage, and per-remote-machine Bell pair consumption.  Constraints
per scenario:

* C1  q_i <= min(capacity_i, availability_i) * x_i        (coupling)
* C2  q_od <= on_demand_capacity * y                      (unit sizing)
* C3  q_hub + fidelity * sum(q_remote) + q_od >= demand   (coverage)
* C4  b_i = q_i for every remote machine                  (one pair per qubit)
* C5  b_i <= bell_capacity_i                              (link capacity)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from .errors import NotOptimalError, ValidationFailedError
from .model import Instance, Plan, Recourse, validate_instance
from .scenarios import ScenarioSet

LESS_EQUAL = "<="
GREATER_EQUAL = ">="
EQUAL = "="

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"
ITERATION_LIMIT = "ITERATION_LIMIT"
NODE_LIMIT = "NODE_LIMIT"

ROLE_RESERVE = "x"
ROLE_UNITS = "y"
ROLE_QUBITS = "q"
ROLE_QUBITS_OD = "q_od"
ROLE_BELLS = "b"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float = 0.0
    upper: Optional[float] = None  # None means unbounded above
    is_integer: bool = False
    objective: float = 0.0


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: Mapping[int, float]
    relation: str
    rhs: float
    name: str = ""


@dataclass(frozen=True)
class VarKey:
    role: str
    machine_id: Optional[str] = None
    scenario: Optional[int] = None


class IndexMap:
    """Bidirectional mapping between variable indices and their roles."""

    def __init__(self, keys):
        self.keys: Tuple[VarKey, ...] = tuple(keys)
        self._by_key: Dict[VarKey, int] = {k: i for i, k in enumerate(self.keys)}

    def index_of(self, role, machine_id=None, scenario=None) -> int:
        return self._by_key[VarKey(role, machine_id, scenario)]

    def key_of(self, index: int) -> VarKey:
        return self.keys[index]

    def indices(self, role: str):
        return [i for i, k in enumerate(self.keys) if k.role == role]

    def __len__(self):
        return len(self.keys)


@dataclass(frozen=True)
class MilpModel:
    variables: Tuple[Variable, ...]
    constraints: Tuple[LinearConstraint, ...]
    index_map: Optional[IndexMap] = None
    sense: str = "min"

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class MilpSolution:
    status: str
    values: Tuple[float, ...]
    objective: float
    nodes: int = 0


def build_deterministic_equivalent(instance: Instance, scenarios: ScenarioSet) -> MilpModel:
    """Translate an instance and scenario set into a single MILP."""
    report = validate_instance(instance, scenarios)
    if not report.ok:
        raise ValidationFailedError(report.violations)

    c = instance.costs
    od = instance.on_demand
    ids = instance.machine_ids()
    remote_ids = instance.non_hub_ids()

    variables = []
    keys = []

    for m in instance.machines:
        variables.append(Variable(
            name=f"x[{m.id}]", lower=0.0, upper=1.0, is_integer=True,
            objective=c.reserve_cost,
        ))
        keys.append(VarKey(ROLE_RESERVE, m.id, None))

    for w, scen in enumerate(scenarios):
        p = scen.probability
        variables.append(Variable(
            name=f"y[s{w}]", lower=0.0, upper=float(od.max_units), is_integer=True,
            objective=p * c.on_demand_cost,
        ))
        keys.append(VarKey(ROLE_UNITS, None, w))
        for m in instance.machines:
            cap = min(m.capacity_qubits, scen.availability[m.id])
            variables.append(Variable(
                name=f"q[{m.id},s{w}]", lower=0.0, upper=float(cap), is_integer=True,
                objective=p * c.qubit_cost,
            ))
            keys.append(VarKey(ROLE_QUBITS, m.id, w))
        variables.append(Variable(
            name=f"q_od[s{w}]", lower=0.0,
            upper=float(od.max_units * od.capacity_qubits), is_integer=True,
            objective=p * c.qubit_cost,
        ))
        keys.append(VarKey(ROLE_QUBITS_OD, None, w))
        for mid in remote_ids:
            variables.append(Variable(
                name=f"b[{mid},s{w}]", lower=0.0,
                upper=float(instance.link(mid).bell_capacity), is_integer=True,
                objective=p * c.bell_pair_cost,
            ))
            keys.append(VarKey(ROLE_BELLS, mid, w))

    index = IndexMap(keys)
    constraints = []
    for w, scen in enumerate(scenarios):
        for m in instance.machines:
            cap = min(m.capacity_qubits, scen.availability[m.id])
            constraints.append(LinearConstraint(
                coeffs={index.index_of(ROLE_QUBITS, m.id, w): 1.0,
                        index.index_of(ROLE_RESERVE, m.id): -float(cap)},
                relation=LESS_EQUAL, rhs=0.0, name=f"C1[{m.id},s{w}]",
            ))
        constraints.append(LinearConstraint(
            coeffs={index.index_of(ROLE_QUBITS_OD, None, w): 1.0,
                    index.index_of(ROLE_UNITS, None, w): -float(od.capacity_qubits)},
            relation=LESS_EQUAL, rhs=0.0, name=f"C2[s{w}]",
        ))
        coverage = {index.index_of(ROLE_QUBITS, instance.hub_id, w): 1.0,
                    index.index_of(ROLE_QUBITS_OD, None, w): 1.0}
        for mid in remote_ids:
            coverage[index.index_of(ROLE_QUBITS, mid, w)] = scen.fidelity
        constraints.append(LinearConstraint(
            coeffs=coverage, relation=GREATER_EQUAL,
            rhs=float(scen.demand_qubits), name=f"C3[s{w}]",
        ))
        for mid in remote_ids:
            constraints.append(LinearConstraint(
                coeffs={index.index_of(ROLE_BELLS, mid, w): 1.0,
                        index.index_of(ROLE_QUBITS, mid, w): -1.0},
                relation=EQUAL, rhs=0.0, name=f"C4[{mid},s{w}]",
            ))
        for mid in remote_ids:
            constraints.append(LinearConstraint(
                coeffs={index.index_of(ROLE_BELLS, mid, w): 1.0},
                relation=LESS_EQUAL,
                rhs=float(instance.link(mid).bell_capacity), name=f"C5[{mid},s{w}]",
            ))

    return MilpModel(
        variables=tuple(variables),
        constraints=tuple(constraints),
        index_map=index,
    )


def model_size(num_machines: int, num_scenarios: int) -> Tuple[int, int]:
    """(variables, constraints) implied by the construction rules."""
    n_vars = num_machines + num_scenarios * (1 + num_machines + 1 + (num_machines - 1))
    n_cons = num_scenarios * 3 * num_machines
    return n_vars, n_cons


def extract_plan(model: MilpModel, solution: MilpSolution) -> Plan:
    """Turn an OPTIMAL solution vector back into a Plan."""
    if solution.status != OPTIMAL:
        raise NotOptimalError(f"cannot extract a plan from a {solution.status} solution")
    index = model.index_map
    if index is None:
        raise NotOptimalError("model carries no index map")

    values = solution.values
    reserved = frozenset(
        k.machine_id for i, k in enumerate(index.keys)
        if k.role == ROLE_RESERVE and values[i] >= 0.5
    )
    num_scenarios = 1 + max(
        (k.scenario for k in index.keys if k.scenario is not None), default=-1)
    machine_ids = [k.machine_id for k in index.keys if k.role == ROLE_RESERVE]

    recourse = []
    for w in range(num_scenarios):
        qubits = {mid: int(round(values[index.index_of(ROLE_QUBITS, mid, w)]))
                  for mid in machine_ids}
        bells = {k.machine_id: int(round(values[index.index_of(ROLE_BELLS, k.machine_id, w)]))
                 for k in index.keys if k.role == ROLE_BELLS and k.scenario == w}
        recourse.append(Recourse(
            on_demand_units=int(round(values[index.index_of(ROLE_UNITS, None, w)])),
            qubits_used=qubits,
            qubits_on_demand=int(round(values[index.index_of(ROLE_QUBITS_OD, None, w)])),
            bell_pairs=bells,
        ))
    return Plan(reserved=reserved, recourse=tuple(recourse), objective=solution.objective)


def verify_solution(model: MilpModel, values, feas_tol: float = 1e-9,
                    int_tol: float = 1e-6) -> list:
    """Independent feasibility/integrality check; returns a list of violations.

    Walks bounds and constraints directly, sharing no code with the solver.
    """
    problems = []
    if len(values) != model.num_variables:
        return [f"value vector has length {len(values)}, expected {model.num_variables}"]
    for i, var in enumerate(model.variables):
        v = values[i]
        if v < var.lower - feas_tol:
            problems.append(f"{var.name} = {v} below lower bound {var.lower}")
        if var.upper is not None and v > var.upper + feas_tol:
            problems.append(f"{var.name} = {v} above upper bound {var.upper}")
        if var.is_integer and abs(v - round(v)) > int_tol:
            problems.append(f"{var.name} = {v} is not integral")
    for con in model.constraints:
        lhs = sum(coef * values[i] for i, coef in con.coeffs.items())
        if con.relation == LESS_EQUAL and lhs > con.rhs + feas_tol:
            problems.append(f"{con.name or 'constraint'}: {lhs} > {con.rhs}")
        elif con.relation == GREATER_EQUAL and lhs < con.rhs - feas_tol:
            problems.append(f"{con.name or 'constraint'}: {lhs} < {con.rhs}")
        elif con.relation == EQUAL and abs(lhs - con.rhs) > feas_tol:
            problems.append(f"{con.name or 'constraint'}: {lhs} != {con.rhs}")
    return problems


def format_lp(model: MilpModel) -> str:
    """Debug dump in LP text format (objective, constraints, bounds, generals)."""
    lines = ["Minimize", " obj: " + _linear_expr(
        {i: v.objective for i, v in enumerate(model.variables) if v.objective}, model)]
    lines.append("Subject To")
    for k, con in enumerate(model.constraints):
        rel = {LESS_EQUAL: "<=", GREATER_EQUAL: ">=", EQUAL: "="}[con.relation]
        lines.append(f" {con.name or f'c{k}'}: {_linear_expr(con.coeffs, model)} {rel} {con.rhs:g}")
    lines.append("Bounds")
    for var in model.variables:
        hi = "+inf" if var.upper is None else f"{var.upper:g}"
        lines.append(f" {var.lower:g} <= {var.name} <= {hi}")
    generals = [v.name for v in model.variables if v.is_integer]
    if generals:
        lines.append("Generals")
        lines.append(" " + " ".join(generals))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _linear_expr(coeffs: Mapping[int, float], model: MilpModel) -> str:
    parts = []
    for i in sorted(coeffs):
        coef = coeffs[i]
        sign = "-" if coef < 0 else ("+" if parts else "")
        parts.append(f"{sign} {abs(coef):g} {model.variables[i].name}".strip())
    return " ".join(parts) if parts else "0"
