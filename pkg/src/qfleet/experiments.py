"""Experiment harness: probability sweep, cost comparison, CSV and SVG output."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence, Union

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .baselines import solve_random, solve_evf
from .errors import QFleetError
from .formulation import OPTIMAL, build_deterministic_equivalent, extract_plan
from .milp import solve_milp
from .model import Instance, cost_components
from .scenarios import make_paper_scenarios
from .simplex import SolveOptions

DEFAULT_P1_GRID = tuple(round(0.05 * i, 2) for i in range(21))
DEFAULT_OD_COSTS = tuple(float(v) for v in range(5000, 50000, 5000))


@dataclass(frozen=True)
class SweepRow:
    p1: float
    reservation_cost: float
    expected_on_demand_cost: float
    expected_qubit_cost: float
    expected_bell_cost: float
    total: float
    reserved_count: int
    on_demand_used: bool


@dataclass(frozen=True)
class SweepError:
    p1: float
    error: str


@dataclass(frozen=True)
class CompareRow:
    on_demand_cost: float
    proposed_total: float
    evf_total: float
    random_mean: float


@dataclass(frozen=True)
class CompareError:
    on_demand_cost: float
    error: str


def run_probability_sweep(instance: Instance, grid: Sequence[float],
                          options: Optional[SolveOptions] = None
                          ) -> List[Union[SweepRow, SweepError]]:
    """Solve the two-scenario model for each probability and split the cost.

    A failing grid point yields a :class:`SweepError` marker; the sweep
    itself never aborts.
    """
    rows: List[Union[SweepRow, SweepError]] = []
    for p1 in sorted(grid):
        try:
            scenarios = make_paper_scenarios(p1, instance.machine_ids())
            model = build_deterministic_equivalent(instance, scenarios)
            solution = solve_milp(model, options)
            if solution.status != OPTIMAL:
                rows.append(SweepError(p1=p1, error=solution.status))
                continue
            plan = extract_plan(model, solution)
            reservation, on_demand, qubits, bells = cost_components(
                instance, scenarios, plan)
            rows.append(SweepRow(
                p1=p1,
                reservation_cost=reservation,
                expected_on_demand_cost=on_demand,
                expected_qubit_cost=qubits,
                expected_bell_cost=bells,
                total=reservation + on_demand + qubits + bells,
                reserved_count=len(plan.reserved),
                on_demand_used=any(r.on_demand_units > 0 for r in plan.recourse),
            ))
        except QFleetError as exc:
            rows.append(SweepError(p1=p1, error=str(exc)))
    return rows


def run_cost_sweep(instance: Instance, p1: float, od_costs: Sequence[float],
                   trials: int = 1000, seed: int = 42,
                   options: Optional[SolveOptions] = None
                   ) -> List[Union[CompareRow, CompareError]]:
    """Proposed vs. EVF vs. random totals while the on-demand cost varies."""
    if not od_costs:
        raise ValueError("od_costs must not be empty")
    if any(v <= 0 for v in od_costs):
        raise ValueError("od_costs must be positive")
    rows: List[Union[CompareRow, CompareError]] = []
    for od_cost in sorted(od_costs):
        try:
            inst = instance.with_on_demand_cost(float(od_cost))
            scenarios = make_paper_scenarios(p1, inst.machine_ids())
            model = build_deterministic_equivalent(inst, scenarios)
            solution = solve_milp(model, options)
            if solution.status != OPTIMAL:
                rows.append(CompareError(on_demand_cost=float(od_cost),
                                         error=solution.status))
                continue
            evf = solve_evf(inst, scenarios, options)
            rnd = solve_random(inst, scenarios, trials=trials, seed=seed)
            rows.append(CompareRow(
                on_demand_cost=float(od_cost),
                proposed_total=solution.objective,
                evf_total=evf.expected_cost,
                random_mean=rnd.expected_cost,
            ))
        except QFleetError as exc:
            rows.append(CompareError(on_demand_cost=float(od_cost), error=str(exc)))
    return rows


def emit_csv(rows: Sequence, path, row_type=None) -> None:
    """Write dataclass rows as CSV; field order defines the columns.

    Floats are written with shortest round-trip repr, so reading the file
    back reproduces them exactly.
    """
    if row_type is None:
        if not rows:
            raise ValueError("row_type is required for an empty row list")
        row_type = type(rows[0])
    names = [f.name for f in fields(row_type)]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(names)
        for row in rows:
            if not isinstance(row, row_type):
                raise ValueError(f"row {row!r} is not a {row_type.__name__}")
            writer.writerow([_format_cell(getattr(row, name)) for name in names])


def load_csv(path, row_type) -> list:
    """Read back a CSV written by :func:`emit_csv`."""
    spec = {f.name: f.type for f in fields(row_type)}
    out = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        for record in reader:
            kwargs = {}
            for name, type_name in spec.items():
                raw = record[name]
                base = str(type_name)
                if "bool" in base:
                    kwargs[name] = raw == "true"
                elif "int" in base:
                    kwargs[name] = int(raw)
                elif "float" in base:
                    kwargs[name] = float(raw)
                else:
                    kwargs[name] = raw
            out.append(row_type(**kwargs))
    return out


def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_SWEEP_SERIES = (
    ("reservation_cost", "reservation"),
    ("expected_on_demand_cost", "on-demand deployment"),
    ("expected_qubit_cost", "qubits"),
    ("expected_bell_cost", "Bell pairs"),
)
_COMPARE_SERIES = (
    ("proposed_total", "proposed"),
    ("evf_total", "EVF"),
    ("random_mean", "random"),
)


def emit_plot(rows: Sequence, path) -> None:
    """Render sweep or comparison rows to a deterministic SVG file.

    Identical inputs produce byte-identical files: the SVG hash salt is
    pinned, text stays text, and no timestamp is embedded.
    """
    rows = [r for r in rows if isinstance(r, (SweepRow, CompareRow))]
    if not rows:
        raise ValueError("nothing to plot")
    if isinstance(rows[0], SweepRow):
        x = [r.p1 for r in rows]
        series, xlabel, title = _SWEEP_SERIES, "probability of the busy scenario", \
            "Cost breakdown by scenario probability"
    else:
        x = [r.on_demand_cost for r in rows]
        series, xlabel, title = _COMPARE_SERIES, "on-demand deployment cost", \
            "Total expected cost by model"

    with matplotlib.rc_context({"svg.hashsalt": "qfleet", "svg.fonttype": "none"}):
        fig = Figure(figsize=(7.0, 4.5))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        for field_name, label in series:
            line, = ax.plot(x, [getattr(r, field_name) for r in rows],
                            marker="o", label=label)
            line.set_gid(f"series_{field_name}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("expected cost")
        ax.set_title(title)
        ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
