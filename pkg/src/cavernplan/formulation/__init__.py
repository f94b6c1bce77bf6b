from .builders import (
    COST_TERMS,
    FormulationError,
    ModelContext,
    add_chp_and_heat,
    add_commitment_linking,
    add_energy_balance,
    add_hydrogen_system,
    add_min_up_down,
    add_output_bounds,
    add_penetration_floor,
    add_ramping,
    build_objective,
    hour_tag,
    per_mwh_om,
)
from .lp import EQ, GE, INF, LE, Constraint, LinearProgram, VariableMap
from .models import build_fast_model, build_oracle_model, fixed_capacity_problem

__all__ = [
    "COST_TERMS",
    "Constraint",
    "EQ",
    "FormulationError",
    "GE",
    "INF",
    "LE",
    "LinearProgram",
    "ModelContext",
    "VariableMap",
    "add_chp_and_heat",
    "add_commitment_linking",
    "add_energy_balance",
    "add_hydrogen_system",
    "add_min_up_down",
    "add_output_bounds",
    "add_penetration_floor",
    "add_ramping",
    "build_fast_model",
    "build_objective",
    "build_oracle_model",
    "fixed_capacity_problem",
    "hour_tag",
    "per_mwh_om",
]
