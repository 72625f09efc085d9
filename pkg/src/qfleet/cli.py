"""Command-line frontend.

Exit codes: 0 success, 1 infeasible (or validation mismatch), 2 input
error, 3 internal solver limit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .baselines import perfect_information_bound
from .errors import InfeasibleError, ParseError, QFleetError, ValidationFailedError
from .experiments import (
    CompareError,
    CompareRow,
    SweepError,
    SweepRow,
    emit_csv,
    emit_plot,
    run_cost_sweep,
    run_probability_sweep,
)
from .formulation import (
    INFEASIBLE,
    ITERATION_LIMIT,
    NODE_LIMIT,
    OPTIMAL,
    build_deterministic_equivalent,
    extract_plan,
)
from .generator import sample_problem
from .io import load_instance, plan_to_json_dict
from .milp import solve_milp
from .oracle import solve_exhaustive
from .scenarios import PAPER_P1, make_paper_scenarios

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2
EXIT_LIMIT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfleet",
        description="Reservation planning for distributed quantum computing fleets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance and print the plan as JSON")
    p_solve.add_argument("-i", "--instance", required=True, help="instance JSON file")
    p_solve.add_argument("--p1", type=float, default=None,
                         help="probability of the busy scenario (overrides file scenarios)")
    p_solve.add_argument("--out", default=None, help="also write the JSON report here")

    p_sweep = sub.add_parser("sweep-prob", help="cost breakdown over a probability grid")
    p_sweep.add_argument("-i", "--instance", required=True)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--step", type=float, required=True)
    p_sweep.add_argument("--csv", required=True)
    p_sweep.add_argument("--plot", default=None)

    p_cmp = sub.add_parser("compare", help="proposed vs EVF vs random over on-demand costs")
    p_cmp.add_argument("-i", "--instance", required=True)
    p_cmp.add_argument("--p1", type=float, required=True)
    p_cmp.add_argument("--od-from", dest="od_start", type=float, required=True)
    p_cmp.add_argument("--od-to", dest="od_stop", type=float, required=True)
    p_cmp.add_argument("--od-step", dest="od_step", type=float, required=True)
    p_cmp.add_argument("--trials", type=int, default=1000)
    p_cmp.add_argument("--seed", type=int, default=42)
    p_cmp.add_argument("--csv", required=True)
    p_cmp.add_argument("--plot", default=None)

    p_val = sub.add_parser("validate", help="randomized solver-vs-oracle equivalence check")
    p_val.add_argument("--instances", type=int, default=200)
    p_val.add_argument("--seed", type=int, default=1)

    return parser


def _grid(start: float, stop: float, step: float):
    if step <= 0:
        raise ValueError("step must be positive")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        values.append(round(v, 12))
        k += 1
    if not values:
        raise ValueError("empty grid")
    return values


def _cmd_solve(args) -> int:
    instance, scenarios = load_instance(args.instance)
    if args.p1 is not None:
        scenarios = make_paper_scenarios(args.p1, instance.machine_ids())
    elif scenarios is None:
        scenarios = make_paper_scenarios(PAPER_P1, instance.machine_ids())

    model = build_deterministic_equivalent(instance, scenarios)
    solution = solve_milp(model)
    if solution.status == INFEASIBLE:
        print("model is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    if solution.status in (NODE_LIMIT, ITERATION_LIMIT):
        print(f"solver stopped at {solution.status}", file=sys.stderr)
        return EXIT_LIMIT

    plan = extract_plan(model, solution)
    report = {
        "status": solution.status,
        "objective": solution.objective,
        "perfect_information_bound": perfect_information_bound(instance, scenarios),
    }
    report.update(plan_to_json_dict(plan, instance))
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    instance, _ = load_instance(args.instance)
    grid = _grid(args.start, args.stop, args.step)
    rows = run_probability_sweep(instance, grid)
    good = [r for r in rows if isinstance(r, SweepRow)]
    failed = [r for r in rows if isinstance(r, SweepError)]
    for r in failed:
        print(f"p1={r.p1}: {r.error}", file=sys.stderr)
    emit_csv(good, args.csv, row_type=SweepRow)
    if args.plot:
        emit_plot(good, args.plot)
    print(json.dumps({"rows": len(good), "errors": len(failed), "csv": args.csv}))
    return EXIT_OK if not failed else EXIT_INFEASIBLE


def _cmd_compare(args) -> int:
    instance, _ = load_instance(args.instance)
    od_costs = _grid(args.od_start, args.od_stop, args.od_step)
    rows = run_cost_sweep(instance, args.p1, od_costs,
                          trials=args.trials, seed=args.seed)
    good = [r for r in rows if isinstance(r, CompareRow)]
    failed = [r for r in rows if isinstance(r, CompareError)]
    for r in failed:
        print(f"on_demand_cost={r.on_demand_cost}: {r.error}", file=sys.stderr)
    emit_csv(good, args.csv, row_type=CompareRow)
    if args.plot:
        emit_plot(good, args.plot)
    print(json.dumps({"rows": len(good), "errors": len(failed), "csv": args.csv}))
    return EXIT_OK if not failed else EXIT_INFEASIBLE


def _cmd_validate(args) -> int:
    rng = random.Random(args.seed)
    matched = 0
    for k in range(args.instances):
        instance, scenarios = sample_problem(rng)
        ok = _agree(instance, scenarios, k)
        if ok:
            matched += 1
    print(f"{matched}/{args.instances} matched")
    return EXIT_OK if matched == args.instances else EXIT_INFEASIBLE


def _agree(instance, scenarios, index) -> bool:
    model = build_deterministic_equivalent(instance, scenarios)
    milp = solve_milp(model)
    try:
        exact = solve_exhaustive(instance, scenarios)
    except InfeasibleError:
        if milp.status == INFEASIBLE:
            return True
        print(f"instance {index}: oracle infeasible, solver {milp.status}", file=sys.stderr)
        return False
    if milp.status != OPTIMAL:
        print(f"instance {index}: oracle {exact.objective}, solver {milp.status}",
              file=sys.stderr)
        return False
    if abs(milp.objective - exact.objective) > 1e-6:
        print(f"instance {index}: oracle {exact.objective} != solver {milp.objective}",
              file=sys.stderr)
        return False
    return True


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "solve": _cmd_solve,
        "sweep-prob": _cmd_sweep,
        "compare": _cmd_compare,
        "validate": _cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except (ParseError, ValidationFailedError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except QFleetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
