"""Single planning run: build, solve, read results back out of the primal vector."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..domain.types import PlanningProblem
from ..domain.validation import validate
from ..formulation import COST_TERMS, EQ, LinearProgram, VariableMap, build_fast_model
from ..solver import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    SolveResult,
    SolverConfig,
    solve_external,
    solve_lp,
)

BALANCE_PREFIX = "eq26.balance."
STOCK_PREFIX = "eq31.soc_balance."
SLACK_TOL = 1e-6

Solver = Union[str, Callable[[LinearProgram], SolveResult]]


class PlanError(RuntimeError):
    """Raised when a plan cannot be produced; carries the solver status."""

    def __init__(self, status: str, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.status = status
        self.diagnostics = diagnostics or {}


@dataclass
class PlanSolution:
    new_capacity: Dict[str, float]
    dispatch: Dict[str, np.ndarray]
    cost_breakdown: Dict[str, float]
    emissions_tco2: float
    wind_curtailed_mwh: float
    solar_curtailed_mwh: float
    soc_series: np.ndarray
    solve_meta: dict
    objective_value: float = math.nan
    installed_capacity: Dict[str, float] = field(default_factory=dict)

    @property
    def total_cost(self) -> float:
        return float(sum(self.cost_breakdown.values()))

    @property
    def curtailed_mwh(self) -> float:
        return self.wind_curtailed_mwh + self.solar_curtailed_mwh

    @property
    def renewable_new_mw(self) -> float:
        return self.new_capacity.get("wind", 0.0) + self.new_capacity.get("solar", 0.0)


def _solve(lp: LinearProgram, solver: Solver, cfg: Optional[SolverConfig]) -> SolveResult:
    if callable(solver):
        return solver(lp)
    if solver == "simplex":
        return solve_lp(lp, cfg)
    if solver == "external":
        return solve_external(lp)
    raise ValueError(f"unknown solver {solver!r}")


def _capacity_keys(problem: PlanningProblem) -> List[Tuple[str, str, str]]:
    """(report key, role, owner) for every expansion column."""
    keys = [(c.id, "new_cap", c.id) for c in problem.thermal_classes]
    keys += [("wind", "new_cap", "wind"), ("solar", "new_cap", "solar")]
    if problem.storage is not None:
        keys += [("storage_energy_mwh", "storage_cap", "storage"),
                 ("p2h_mw", "p2h_cap", "storage"), ("h2p_mw", "h2p_cap", "storage")]
    return keys


def extract_solution(problem: PlanningProblem, lp: LinearProgram, vmap: VariableMap,
                     result: SolveResult) -> PlanSolution:
    """Read every reported quantity from ``result.primal_values``."""
    x = result.primal_values
    new_capacity = {}
    installed = {}
    existing = {c.id: c.existing_capacity_mw for c in problem.thermal_classes}
    existing.update(wind=problem.wind.existing_capacity_mw, solar=problem.solar.existing_capacity_mw)
    for key, role, owner in _capacity_keys(problem):
        idx = vmap.find(role, owner)
        value = float(x[idx]) if idx is not None else 0.0
        new_capacity[key] = max(value, 0.0)
        installed[key] = existing.get(key, 0.0) + new_capacity[key]
    dispatch: Dict[str, np.ndarray] = {}
    for role, owner in vmap.roles():
        if owner is not None and "#" in owner:
            continue
        try:
            dispatch[f"{role}.{owner}"] = vmap.values(x, role, owner)
        except KeyError:
            continue  # capacity columns have no hourly series
    soc = dispatch.get("soc.storage", np.zeros(problem.horizon))
    breakdown = lp.cost_breakdown(x)
    breakdown = {term: breakdown.get(term, 0.0) for term in COST_TERMS}
    sol = PlanSolution(
        new_capacity=new_capacity,
        dispatch=dispatch,
        cost_breakdown=breakdown,
        emissions_tco2=0.0,
        wind_curtailed_mwh=0.0,
        solar_curtailed_mwh=0.0,
        soc_series=np.clip(soc, 0.0, None),
        solve_meta=result.summary(),
        objective_value=result.objective_value,
        installed_capacity=installed,
    )
    sol.wind_curtailed_mwh, sol.solar_curtailed_mwh = compute_curtailment(sol, problem)
    sol.emissions_tco2 = compute_emissions(sol, problem)
    return sol


def compute_curtailment(solution: PlanSolution, problem: PlanningProblem,
                        tol: float = 1e-6) -> Tuple[float, float]:
    """Available minus delivered renewable energy, per technology, in MWh."""
    dt = problem.series.dt_hours
    out = []
    for res, cf in ((problem.wind, problem.series.wind_cf), (problem.solar, problem.series.solar_cf)):
        capacity = res.existing_capacity_mw + solution.new_capacity.get(res.kind, 0.0)
        delivered = solution.dispatch.get(f"{res.kind}_output.{res.kind}", np.zeros(len(cf)))
        value = float(np.sum(cf * capacity - delivered) * dt)
        scale = max(1.0, float(np.sum(cf)) * capacity * dt)
        if value < -tol * scale:
            raise ValueError(f"{res.kind} output exceeds availability by {-value:.6g} MWh")
        out.append(max(value, 0.0))
    return out[0], out[1]


def compute_emissions(solution: PlanSolution, problem: PlanningProblem) -> float:
    """Sum over classes and hours of emission factor times thermal energy (tCO2)."""
    dt = problem.series.dt_hours
    total = 0.0
    for cls in problem.thermal_classes:
        out = solution.dispatch.get(f"thermal_output.{cls.id}")
        if out is not None:
            total += cls.emission_factor * float(np.sum(out)) * dt
    return total


def balance_diagnostics(problem: PlanningProblem, cfg: Optional[SolverConfig] = None,
                        solver: Solver = "simplex") -> dict:
    """Re-solve with elastic slack on every hourly energy balance.

    The production objective is dropped; only total slack is minimised. Hours
    that still need slack are the ones the system cannot serve.
    """
    lp, _ = build_fast_model(problem)
    elastic = LinearProgram(lp.name + "_elastic")
    for j, name in enumerate(lp.var_names):
        elastic.add_variable(name, lp.lb[j], lp.ub[j])
    slack_cols = {}
    for con in lp.constraints:
        terms = list(zip(con.indices, con.coefs))
        if con.name.startswith(BALANCE_PREFIX):
            up = elastic.add_variable(f"slack.short.{con.name}")
            down = elastic.add_variable(f"slack.surplus.{con.name}")
            elastic.add_cost("slack", up, 1.0)
            elastic.add_cost("slack", down, 1.0)
            terms += [(up, 1.0), (down, -1.0)]
            slack_cols[con.name] = (up, down)
        elastic.add_constraint(con.name, terms, con.sense, con.rhs)
    result = _solve(elastic, solver, cfg)
    if result.status != OPTIMAL:
        return {"status": result.status, "hours": [], "note": "infeasible beyond the energy balance rows"}
    x = result.primal_values
    hours = []
    for name, (up, down) in slack_cols.items():
        short, surplus = float(x[up]), float(x[down])
        if short > SLACK_TOL or surplus > SLACK_TOL:
            hours.append({"hour": int(name.rsplit(".t", 1)[1]), "shortfall_mw": short, "surplus_mw": surplus})
    return {"status": "elastic_optimal", "total_slack_mwh": float(result.objective_value), "hours": hours}


def run_plan(problem: PlanningProblem, cfg: Optional[SolverConfig] = None,
             solver: Solver = "simplex") -> PlanSolution:
    """Build the continuous planning model, solve it and extract the plan.

    ``solver`` is ``"simplex"`` (in-repo), ``"external"`` (MPS hand-off via the
    configured command) or any callable mapping a LinearProgram to a
    SolveResult.
    """
    problems = validate(problem)
    if problems:
        raise ValueError("invalid problem: " + "; ".join(map(str, problems)))
    lp, vmap = build_fast_model(problem)
    result = _solve(lp, solver, cfg)
    if result.status == OPTIMAL:
        return extract_solution(problem, lp, vmap, result)
    if result.status == INFEASIBLE:
        diag = balance_diagnostics(problem, cfg, solver)
        raise PlanError(INFEASIBLE, f"planning model is infeasible; {len(diag['hours'])} hours need balance slack",
                        diag)
    if result.status == UNBOUNDED:
        raise PlanError(UNBOUNDED, "planning model is unbounded")
    raise PlanError(ITERATION_LIMIT, f"solver stopped after {result.iterations} iterations")


def audit_conservation(lp: LinearProgram, vmap: VariableMap, x: np.ndarray) -> Dict[str, float]:
    """Worst scaled residual of the hourly energy balance and the stock balance.

    Balance rows are scaled by ``max(1, demand)``, stock rows by
    ``max(1, built storage capacity)``.
    """
    x = np.asarray(x, float)
    act = lp.matrix() @ x
    worst_balance = 0.0
    worst_stock = 0.0
    idx = vmap.find("storage_cap", "storage")
    cap = float(x[idx]) if idx is not None else 0.0
    for r, con in enumerate(lp.constraints):
        if con.sense != EQ:
            continue
        if con.name.startswith(BALANCE_PREFIX):
            worst_balance = max(worst_balance, abs(act[r] - con.rhs) / max(1.0, abs(con.rhs)))
        elif con.name.startswith(STOCK_PREFIX):
            worst_stock = max(worst_stock, abs(act[r] - con.rhs) / max(1.0, cap))
    return {"energy_balance": worst_balance, "stock_balance": worst_stock}
