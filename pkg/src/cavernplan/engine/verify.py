"""Fast continuous UC against the binary oracle on small fixed-capacity instances."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..domain.defaults import default_renewables, default_thermal_classes
from ..domain.io import format_sig
from ..domain.synthetic import gen_seasonal_series
from ..domain.types import PlanningProblem, TimeSeriesBundle
from ..formulation import build_fast_model, build_oracle_model, fixed_capacity_problem
from ..solver import OPTIMAL, SolverConfig, solve_lp, solve_mip

GAP_TOL = 1e-9


class RelaxationError(AssertionError):
    """The continuous model came out above the binary oracle."""


@dataclass(frozen=True)
class UCInstance:
    name: str
    problem: PlanningProblem
    units: int

    @property
    def hours(self) -> int:
        return self.problem.horizon

    @property
    def classes(self) -> int:
        return len(self.problem.thermal_classes)


def random_uc_instance(seed: int, units: int, hours: int, classes: Optional[int] = None) -> UCInstance:
    """Random fixed-capacity instance with ``units`` identical units per class.

    Demand follows a daily shape between roughly 40% and 80% of the thermal
    fleet. The binary oracle may still reject an instance when minimum
    up/down times bite.
    """
    rng = np.random.default_rng(seed)
    n_cls = int(classes) if classes is not None else int(rng.integers(1, 3))
    pool = [c for c in default_thermal_classes(100.0) if not c.is_chp]
    if not 1 <= n_cls <= len(pool):
        raise ValueError(f"classes must be between 1 and {len(pool)}")
    order = rng.permutation(len(pool))[:n_cls]
    thermal = []
    for k in sorted(order):
        cls = pool[k]
        size = float(rng.integers(20, 61))
        thermal.append(replace(
            cls,
            unit_size_mw=size,
            min_up_hours=int(rng.integers(1, min(4, hours) + 1)),
            min_down_hours=int(rng.integers(1, min(3, hours) + 1)),
            fuel_cost=round(cls.fuel_cost * rng.uniform(0.8, 1.2), 2),
            startup_cost=round(cls.startup_cost * rng.uniform(0.5, 2.0), 2),
        ))
    fleet = units * sum(c.unit_size_mw for c in thermal)
    t = np.arange(hours)
    # start near the daily trough so start-up ramp limits can serve hour 0
    shape = 0.6 - rng.uniform(0.1, 0.2) * np.cos(2.0 * np.pi * t / 24.0)
    shape = np.clip(shape + 0.03 * rng.standard_normal(hours), 0.35, 0.9)
    shape[0] = min(shape[0], 0.45)
    demand = np.round(fleet * shape, 3)
    wind_cf = np.round(rng.uniform(0.0, 0.6, hours), 4)
    solar_cf = np.round(np.clip(np.sin(np.pi * ((t % 24) - 6) / 12.0), 0.0, 1.0) * rng.uniform(0.3, 0.8), 4)
    wind, solar = default_renewables(100.0)
    wind = replace(wind, existing_capacity_mw=round(0.15 * fleet, 3))
    solar = replace(solar, existing_capacity_mw=round(0.1 * fleet, 3))
    series = TimeSeriesBundle(demand, np.zeros(hours), wind_cf, solar_cf)
    problem = PlanningProblem(thermal, wind, solar, None, series, 0.0)
    return UCInstance(f"seed{seed}_J{units}_T{hours}", fixed_capacity_problem(problem, units), units)


def seasonal_uc_instance(seed: int, units: int, hours: int) -> UCInstance:
    """Coal and gas classes of 60 MW units on a cut of the 48-hour double-peak series.

    Demand is 80% of the synthetic load; minimum up and down times are capped
    at 3 and 2 hours so short horizons stay meaningful.
    """
    if not 1 <= hours <= 48:
        raise ValueError("seasonal instances support 1 to 48 hours")
    full = gen_seasonal_series(48, 100.0, 0.35, 0.35, seed)
    series = TimeSeriesBundle(full.demand_mw[:hours] * 0.8, np.zeros(hours),
                              full.wind_cf[:hours], full.solar_cf[:hours])
    thermal = [replace(c, min_up_hours=min(c.min_up_hours, 3, hours),
                       min_down_hours=min(c.min_down_hours, 2, hours), unit_size_mw=60.0)
               for c in default_thermal_classes(100.0) if not c.is_chp]
    problem = PlanningProblem(thermal, *default_renewables(100.0), None, series, 0.0)
    return UCInstance(f"seasonal{seed}_J{units}_T{hours}", fixed_capacity_problem(problem, units), units)


FAMILIES = ("random", "seasonal")


def random_family(n: int, seed: int, units: Sequence[int], hours: Sequence[int],
                  classes: Optional[int] = None, family: str = "random") -> List[UCInstance]:
    """``n`` instances; instance ``k`` uses seed ``seed + k``, ``units[k % len]`` and ``hours[k % len]``.

    ``classes`` applies to the random family only; seasonal instances always
    have the coal and gas classes.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    out = []
    for k in range(n):
        J, T = units[k % len(units)], hours[k % len(hours)]
        if family == "random":
            out.append(random_uc_instance(seed + k, J, T, classes))
        else:
            out.append(seasonal_uc_instance(seed + k, J, T))
    return out


def relative_gap(fast: float, oracle: float) -> float:
    """``(oracle - fast) / |oracle|``; zero when the two agree exactly."""
    if oracle == fast:
        return 0.0
    return (oracle - fast) / max(abs(oracle), 1e-12)


@dataclass
class VerificationRow:
    instance: str
    classes: int
    units: int
    hours: int
    status: str
    fast_objective: float
    oracle_objective: float
    gap: float
    oracle_nodes: int
    fast_iterations: int
    oracle_iterations: int
    fast_time: float = 0.0
    oracle_time: float = 0.0


TIMING_FIELDS = ("fast_time", "oracle_time")


@dataclass
class VerificationTable:
    rows: List[VerificationRow] = field(default_factory=list)

    def solved(self) -> List[VerificationRow]:
        return [r for r in self.rows if r.status == OPTIMAL]

    @property
    def median_gap(self) -> Optional[float]:
        gaps = [r.gap for r in self.solved()]
        return statistics.median(gaps) if gaps else None

    @property
    def max_gap(self) -> Optional[float]:
        gaps = [r.gap for r in self.solved()]
        return max(gaps) if gaps else None

    def fast_always_faster(self) -> bool:
        return all(r.fast_time < r.oracle_time for r in self.solved())

    def _records(self, timings: bool) -> List[dict]:
        out = []
        for r in self.rows:
            rec = {k: None if isinstance(v, float) and math.isnan(v) else v for k, v in asdict(r).items()}
            if not timings:
                for key in TIMING_FIELDS:
                    rec.pop(key)
            out.append(rec)
        return out

    def to_json(self, timings: bool = False) -> str:
        data = {"rows": self._records(timings),
                "summary": {"instances": len(self.rows), "solved": len(self.solved()),
                            "median_gap": self.median_gap, "max_gap": self.max_gap}}
        if timings:
            data["summary"]["fast_always_faster"] = self.fast_always_faster()
        return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv(self, timings: bool = False) -> str:
        records = self._records(timings)
        names = [f for f in VerificationRow.__dataclass_fields__ if timings or f not in TIMING_FIELDS]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(names)
        for rec in records:
            writer.writerow([format_sig(v) if isinstance(v, float) else v for v in (rec[n] for n in names)])
        return buf.getvalue()


def verify_instance(inst: UCInstance, cfg: Optional[SolverConfig] = None,
                    gap_tol: float = GAP_TOL) -> VerificationRow:
    cfg = cfg or SolverConfig(bnb_gap_tol=1e-9)
    fast_lp, _ = build_fast_model(inst.problem)
    oracle_lp, _ = build_oracle_model(inst.problem, inst.units)
    fast = solve_lp(fast_lp, cfg)
    oracle = solve_mip(oracle_lp, cfg)
    status = oracle.status if fast.status == OPTIMAL else f"fast_{fast.status}"
    gap = float("nan")
    if fast.status == OPTIMAL and oracle.status == OPTIMAL:
        gap = relative_gap(fast.objective_value, oracle.objective_value)
        if gap < -gap_tol:
            raise RelaxationError(f"{inst.name}: fast objective {fast.objective_value!r} exceeds "
                                  f"oracle objective {oracle.objective_value!r}")
    return VerificationRow(
        instance=inst.name, classes=inst.classes, units=inst.units, hours=inst.hours, status=status,
        fast_objective=fast.objective_value, oracle_objective=oracle.objective_value, gap=gap,
        oracle_nodes=oracle.nodes, fast_iterations=fast.iterations, oracle_iterations=oracle.iterations,
        fast_time=fast.wall_time, oracle_time=oracle.wall_time,
    )


def verify_fast_uc(instances: Iterable[UCInstance], cfg: Optional[SolverConfig] = None,
                   gap_tol: float = GAP_TOL) -> VerificationTable:
    """Solve each instance with both models and tabulate objectives, gap and times.

    Raises RelaxationError when a continuous objective exceeds the oracle's by
    more than ``gap_tol`` relative.
    """
    return VerificationTable([verify_instance(inst, cfg, gap_tol) for inst in instances])
