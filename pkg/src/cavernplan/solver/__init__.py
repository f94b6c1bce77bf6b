from .external import SOLVER_ENV, ExternalSolverError, configured_command, read_solution, solve_external, write_solution
from .mip import solve_mip
from .mps import MPSError, export_mps, format_number, parse_mps
from .simplex import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    STATUSES,
    UNBOUNDED,
    Basis,
    SolveResult,
    SolverConfig,
    simplex_arrays,
    solve_lp,
)

__all__ = [
    "Basis",
    "ExternalSolverError",
    "INFEASIBLE",
    "ITERATION_LIMIT",
    "MPSError",
    "OPTIMAL",
    "SOLVER_ENV",
    "STATUSES",
    "SolveResult",
    "SolverConfig",
    "UNBOUNDED",
    "configured_command",
    "export_mps",
    "format_number",
    "parse_mps",
    "read_solution",
    "simplex_arrays",
    "solve_external",
    "solve_lp",
    "solve_mip",
    "write_solution",
]
