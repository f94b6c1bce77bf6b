from .compare import (
    REFERENCE,
    SCENARIOS,
    ComparisonReport,
    ScenarioSpec,
    compute_deltas,
    relative_delta,
    run_comparison,
    scenario_specs,
    summarize,
)
from .plan import (
    PlanError,
    PlanSolution,
    audit_conservation,
    balance_diagnostics,
    compute_curtailment,
    compute_emissions,
    extract_solution,
    run_plan,
)
from .reports import comparison_files, plan_files, plan_report, write_files
from .verify import (
    RelaxationError,
    UCInstance,
    VerificationRow,
    VerificationTable,
    random_family,
    random_uc_instance,
    relative_gap,
    seasonal_uc_instance,
    verify_fast_uc,
    verify_instance,
)

__all__ = [
    "REFERENCE",
    "SCENARIOS",
    "ComparisonReport",
    "PlanError",
    "PlanSolution",
    "RelaxationError",
    "ScenarioSpec",
    "UCInstance",
    "VerificationRow",
    "VerificationTable",
    "audit_conservation",
    "balance_diagnostics",
    "comparison_files",
    "compute_curtailment",
    "compute_deltas",
    "compute_emissions",
    "extract_solution",
    "plan_files",
    "plan_report",
    "random_family",
    "random_uc_instance",
    "relative_delta",
    "relative_gap",
    "run_comparison",
    "run_plan",
    "scenario_specs",
    "seasonal_uc_instance",
    "summarize",
    "verify_fast_uc",
    "verify_instance",
    "write_files",
]
