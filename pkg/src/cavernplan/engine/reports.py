"""JSON and CSV report files.

JSON keeps full float precision with sorted keys; CSV values carry six
significant digits. Wall-clock timings never enter these files, so repeated
runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

from ..domain.io import format_sig
from ..domain.types import PlanningProblem
from ..formulation import COST_TERMS
from .compare import ComparisonReport, summarize
from .plan import PlanSolution

REPORT_VERSION = 1


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_sig(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_files(out_dir: Path, files: Dict[str, str]) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in sorted(files):
        path = out_dir / name
        path.write_text(files[name])
        paths.append(path)
    return paths


def class_emissions(solution: PlanSolution, problem: PlanningProblem) -> List[tuple]:
    dt = problem.series.dt_hours
    out = []
    for cls in problem.thermal_classes:
        series = solution.dispatch.get(f"thermal_output.{cls.id}")
        energy = float(series.sum()) * dt if series is not None else 0.0
        out.append((cls.id, energy, cls.emission_factor * energy))
    return out


def plan_report(solution: PlanSolution, problem: PlanningProblem, scenario: str) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "kind": "plan",
        "scenario": scenario,
        "penetration": float(problem.penetration_target),
        "horizon_hours": problem.horizon,
        "summary": summarize(solution),
        "dispatch": {k: [float(v) for v in solution.dispatch[k]] for k in sorted(solution.dispatch)},
    }


def plan_files(solution: PlanSolution, problem: PlanningProblem, scenario: str) -> Dict[str, str]:
    s = summarize(solution)
    cap = csv_text(["asset", "new", "installed"],
                   [(k, s["new_capacity"][k], s["installed_capacity"][k]) for k in s["new_capacity"]])
    cost = csv_text(["term", "cost"], [(k, s["cost_breakdown"][k]) for k in COST_TERMS]
                    + [("total", s["total_cost"])])
    curt = csv_text(["technology", "curtailed_mwh"],
                    [("wind", s["wind_curtailed_mwh"]), ("solar", s["solar_curtailed_mwh"]),
                     ("total", s["curtailed_mwh"])])
    emis = csv_text(["class", "energy_mwh", "emissions_tco2"],
                    class_emissions(solution, problem) + [("total", None, s["emissions_tco2"])])
    soc = csv_text(["t", "soc_mwh"], enumerate(s["soc_series"]))
    return {
        "plan.json": dumps(plan_report(solution, problem, scenario)),
        "new_capacity.csv": cap,
        "cost_distribution.csv": cost,
        "curtailment.csv": curt,
        "emissions.csv": emis,
        "soc.csv": soc,
    }


def comparison_files(report: ComparisonReport) -> Dict[str, str]:
    rows = report.rows
    assets = []
    for r in rows:
        for k in r["summary"]["new_capacity"]:
            if k not in assets:
                assets.append(k)
    cap = csv_text(["scenario", "penetration"] + assets,
                   [[r["scenario"], r["penetration"]] + [r["summary"]["new_capacity"].get(a, 0.0) for a in assets]
                    for r in rows])
    cost = csv_text(["scenario", "penetration", *COST_TERMS, "total"],
                    [[r["scenario"], r["penetration"], *(r["summary"]["cost_breakdown"][k] for k in COST_TERMS),
                      r["summary"]["total_cost"]] for r in rows])
    curt = csv_text(["scenario", "penetration", "wind_mwh", "solar_mwh", "total_mwh"],
                    [[r["scenario"], r["penetration"], r["summary"]["wind_curtailed_mwh"],
                      r["summary"]["solar_curtailed_mwh"], r["summary"]["curtailed_mwh"]] for r in rows])
    emis = csv_text(["scenario", "penetration", "emissions_tco2"],
                    [[r["scenario"], r["penetration"], r["summary"]["emissions_tco2"]] for r in rows])
    soc = csv_text(["scenario", "penetration", "t", "soc_mwh"],
                   [[r["scenario"], r["penetration"], t, v]
                    for r in rows for t, v in enumerate(r["summary"]["soc_series"])])
    deltas = csv_text(["scenario", "reference", "penetration", "cost_pct", "emissions_pct", "curtailment_pct"],
                      [[d["scenario"], d["reference"], d["penetration"], d["cost_pct"], d["emissions_pct"],
                        d["curtailment_pct"]] for d in report.deltas])
    return {
        "comparison.json": report.to_json(),
        "new_capacity.csv": cap,
        "cost_distribution.csv": cost,
        "curtailment.csv": curt,
        "emissions.csv": emis,
        "soc.csv": soc,
        "deltas.csv": deltas,
    }
