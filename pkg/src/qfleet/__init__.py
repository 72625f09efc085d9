"""Reservation planning for distributed quantum computing fleets.

Builds the deterministic equivalent of a two-stage stochastic program
(reserve machines now, deploy on-demand capacity per realized scenario),
solves it with a self-contained simplex/branch-and-bound stack, and ships
the oracle, baselines, and experiment harness used to validate it.
"""

from .baselines import (
    BaselineResult,
    perfect_information_bound,
    solve_evf,
    solve_random,
)
from .errors import (
    AllInfeasibleError,
    BadBoundsError,
    BadProbabilityError,
    InfeasibleError,
    NotOptimalError,
    ParseError,
    QFleetError,
    ScenarioInfeasibleError,
    StructureMismatchError,
    TooLargeError,
    UnboundedModelError,
    ValidationFailedError,
)
from .experiments import (
    CompareError,
    CompareRow,
    DEFAULT_OD_COSTS,
    DEFAULT_P1_GRID,
    SweepError,
    SweepRow,
    emit_csv,
    emit_plot,
    load_csv,
    run_cost_sweep,
    run_probability_sweep,
)
from .formulation import (
    INFEASIBLE,
    ITERATION_LIMIT,
    MilpModel,
    MilpSolution,
    NODE_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    build_deterministic_equivalent,
    extract_plan,
    format_lp,
    model_size,
    verify_solution,
)
from .generator import sample_problem
from .io import (
    instance_from_json_dict,
    instance_to_json_dict,
    load_instance,
    plan_to_json_dict,
    scenario_set_from_json_dict,
    scenario_set_to_json_dict,
)
from .milp import solve_milp
from .model import (
    CostParams,
    Instance,
    LinkSpec,
    MachineSpec,
    OnDemandSpec,
    Plan,
    Recourse,
    ValidationReport,
    cost_components,
    cost_of_plan,
    empty_plan,
    paper_instance,
    validate_instance,
    zero_recourse,
)
from .oracle import (
    build_first_stage_plan,
    evaluate_first_stage,
    second_stage_optimal,
    solve_exhaustive,
)
from .scenarios import (
    Scenario,
    ScenarioBounds,
    ScenarioSet,
    average_scenario,
    make_paper_scenarios,
    sample_scenarios,
)
from .simplex import (
    LpSolution,
    PREFER_FEWER_RESERVATIONS,
    SolveOptions,
    TIEBREAK_NONE,
    solve_lp,
)

__version__ = "0.1.0"
