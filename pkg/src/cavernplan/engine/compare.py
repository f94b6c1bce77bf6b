"""Three-scenario comparison across penetration levels."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..domain.types import PlanningProblem, StorageTech
from ..formulation import COST_TERMS
from ..solver import SolverConfig
from .plan import PlanSolution, run_plan

SCENARIOS = ("BAU", "HSS", "SCHSS")
REFERENCE = "SCHSS"
DELTA_METRICS = {"cost": "total_cost", "emissions": "emissions_tco2", "curtailment": "curtailed_mwh"}


@dataclass(frozen=True)
class ScenarioSpec:
    """One storage scenario swept over penetration levels.

    ``problem_template`` carries everything except storage and the
    penetration target; both are filled in per run.
    """

    storage_kind: str
    storage: Optional[StorageTech]
    penetration_levels: Tuple[float, ...]
    problem_template: PlanningProblem

    def __post_init__(self):
        if self.storage_kind not in SCENARIOS:
            raise ValueError(f"storage_kind must be one of {SCENARIOS}, got {self.storage_kind!r}")
        levels = tuple(float(r) for r in self.penetration_levels)
        if not levels:
            raise ValueError("at least one penetration level is required")
        if any(not (0.0 <= r < 1.0) for r in levels):
            raise ValueError("penetration levels must lie in [0, 1)")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("penetration levels must be strictly increasing")
        object.__setattr__(self, "penetration_levels", levels)

    def problem(self, rho: float) -> PlanningProblem:
        return replace(self.problem_template, storage=self.storage, penetration_target=rho)


def scenario_specs(template: PlanningProblem, presets: Mapping[str, StorageTech],
                   levels: Sequence[float]) -> List[ScenarioSpec]:
    """BAU, HSS and SCHSS specs sharing one template and one set of levels."""
    base = replace(template, storage=None)
    return [ScenarioSpec(kind, presets[kind], tuple(levels), base) for kind in SCENARIOS]


def summarize(solution: PlanSolution) -> dict:
    """JSON-ready view of a plan; timings are left out so reports are reproducible."""
    meta = dict(solution.solve_meta)
    meta.pop("wall_time", None)
    return {
        "objective": float(solution.objective_value),
        "total_cost": solution.total_cost,
        "cost_breakdown": {k: float(solution.cost_breakdown[k]) for k in COST_TERMS},
        "emissions_tco2": float(solution.emissions_tco2),
        "wind_curtailed_mwh": float(solution.wind_curtailed_mwh),
        "solar_curtailed_mwh": float(solution.solar_curtailed_mwh),
        "curtailed_mwh": float(solution.curtailed_mwh),
        "new_capacity": {k: float(v) for k, v in solution.new_capacity.items()},
        "installed_capacity": {k: float(v) for k, v in solution.installed_capacity.items()},
        "renewable_new_mw": float(solution.renewable_new_mw),
        "soc_series": [float(v) for v in solution.soc_series],
        "solve": meta,
    }


def relative_delta(other: float, reference: float) -> Optional[float]:
    """``(other - reference) / other``; None when ``other`` is zero and the values differ."""
    if other == reference:
        return 0.0
    if other == 0.0:
        return None
    return (other - reference) / other


@dataclass
class ComparisonReport:
    rows: List[dict] = field(default_factory=list)
    deltas: List[dict] = field(default_factory=list)

    def row(self, scenario: str, rho: float) -> dict:
        for r in self.rows:
            if r["scenario"] == scenario and r["penetration"] == rho:
                return r
        raise KeyError((scenario, rho))

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "deltas": self.deltas}, indent=2, sort_keys=True,
                          allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ComparisonReport":
        data = json.loads(text)
        return cls(rows=data["rows"], deltas=data["deltas"])

    def __eq__(self, other):
        if not isinstance(other, ComparisonReport):
            return NotImplemented
        return self.rows == other.rows and self.deltas == other.deltas


def compute_deltas(rows: Sequence[dict], reference: str = REFERENCE) -> List[dict]:
    """Percentage change of the reference scenario against every scenario, per level."""
    by_key = {(r["scenario"], r["penetration"]): r for r in rows}
    out = []
    for r in rows:
        ref = by_key.get((reference, r["penetration"]))
        if ref is None:
            continue
        entry = {"scenario": r["scenario"], "reference": reference, "penetration": r["penetration"]}
        for name, key in DELTA_METRICS.items():
            d = relative_delta(r["summary"][key], ref["summary"][key])
            entry[f"{name}_pct"] = None if d is None else 100.0 * d
        out.append(entry)
    return out


def _run_cell(args) -> dict:
    spec, rho, cfg, solver = args
    sol = run_plan(spec.problem(rho), cfg, solver)
    return {"scenario": spec.storage_kind, "penetration": rho, "summary": summarize(sol)}


def run_comparison(specs: Sequence[ScenarioSpec], penetrations: Optional[Sequence[float]] = None,
                   cfg: Optional[SolverConfig] = None, solver: str = "simplex",
                   workers: int = 1) -> ComparisonReport:
    """Solve every (scenario, level) cell and assemble the report.

    Cells are independent; with ``workers > 1`` they run in a process pool.
    Rows come back ordered by scenario (BAU, HSS, SCHSS) then level either way.
    """
    specs = list(specs)
    kinds = [s.storage_kind for s in specs]
    if len(set(kinds)) != len(kinds):
        raise ValueError("scenario kinds must be distinct")
    template = specs[0].problem_template
    for s in specs[1:]:
        if s.problem_template != template:
            raise ValueError("all scenarios must share the same problem template")
    jobs = []
    for spec in sorted(specs, key=lambda s: SCENARIOS.index(s.storage_kind)):
        levels = spec.penetration_levels if penetrations is None else tuple(penetrations)
        jobs += [(spec, float(rho), cfg, solver) for rho in levels]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs))
    else:
        rows = [_run_cell(job) for job in jobs]
    report = ComparisonReport(rows=rows)
    if REFERENCE in kinds:
        report.deltas = compute_deltas(rows)
    return report
