from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .types import (
    RENEWABLE_KINDS,
    STORAGE_KINDS,
    PlanningProblem,
    RenewableClass,
    StorageTech,
    ThermalUnitClass,
)


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def __str__(self):
        return f"{self.field}: {self.rule}"


def _finite_nonneg(value) -> bool:
    return value is not None and not math.isnan(value) and value >= 0


def _check_thermal(cls: ThermalUnitClass, where: str, horizon: int) -> List[Violation]:
    out = []

    def bad(name, rule):
        out.append(Violation(f"{where}.{name}", rule))

    if not (0 <= cls.min_output_ratio <= cls.max_output_ratio <= 1):
        bad("min_output_ratio", "require 0 <= min_output_ratio <= max_output_ratio <= 1")
    for name in ("startup_ramp_ratio", "shutdown_ramp_ratio"):
        v = getattr(cls, name)
        if not (cls.min_output_ratio <= v <= 1):
            bad(name, "require min_output_ratio <= value <= 1")
    for name in ("ramp_up_ratio", "ramp_down_ratio"):
        if not (0 <= getattr(cls, name) <= 1):
            bad(name, "require 0 <= value <= 1")
    if cls.min_up_hours < 1:
        bad("min_up_hours", "require >= 1")
    elif cls.min_up_hours > horizon:
        bad("min_up_hours", f"exceeds horizon of {horizon} h")
    if cls.min_down_hours < 1:
        bad("min_down_hours", "require >= 1")
    elif cls.min_down_hours > horizon:
        bad("min_down_hours", f"exceeds horizon of {horizon} h")
    if not cls.unit_size_mw > 0:
        bad("unit_size_mw", "require > 0")
    for name in ("existing_capacity_mw", "capital_cost", "om_cost_frac", "fuel_cost",
                 "startup_cost", "emission_factor", "max_new_mw"):
        if not _finite_nonneg(getattr(cls, name)):
            bad(name, "require >= 0")
    if cls.amortized_capital is not None and not _finite_nonneg(cls.amortized_capital):
        bad("amortized_capital", "require >= 0")
    if cls.is_chp:
        if cls.thermoelectric_ratio is None or not cls.thermoelectric_ratio > 0:
            bad("thermoelectric_ratio", "CHP class requires thermoelectric_ratio > 0")
    elif cls.thermoelectric_ratio is not None:
        bad("thermoelectric_ratio", "must be absent for non-CHP class")
    return out


def _check_renewable(cls: RenewableClass, expected: str) -> List[Violation]:
    out = []
    if cls.kind != expected:
        out.append(Violation(f"{expected}.kind", f"expected {expected!r}, got {cls.kind!r}"))
    for name in ("existing_capacity_mw", "capital_cost", "om_cost", "max_new_mw"):
        if not _finite_nonneg(getattr(cls, name)):
            out.append(Violation(f"{expected}.{name}", "require >= 0"))
    if cls.amortized_capital is not None and not _finite_nonneg(cls.amortized_capital):
        out.append(Violation(f"{expected}.amortized_capital", "require >= 0"))
    return out


def _check_storage(st: StorageTech) -> List[Violation]:
    out = []

    def bad(name, rule):
        out.append(Violation(f"storage.{name}", rule))

    if st.kind not in STORAGE_KINDS:
        bad("kind", f"must be one of {STORAGE_KINDS}")
    for name in ("eta_p2h", "eta_h2p", "eta_in", "eta_out"):
        v = getattr(st, name)
        if not (0 < v <= 1):
            bad(name, "require 0 < value <= 1")
    if not (0 <= st.leak_rate_per_hour < 1):
        bad("leak_rate_per_hour", "require 0 <= value < 1")
    if not (0 <= st.initial_soc_frac <= 1):
        bad("initial_soc_frac", "require 0 <= value <= 1")
    if not (0 <= st.p2h_min_load_frac <= 1):
        bad("p2h_min_load_frac", "require 0 <= value <= 1")
    for name in ("max_flow_in_mw", "max_flow_out_mw", "energy_cap_limit_mwh",
                 "p2h_cap_limit_mw", "h2p_cap_limit_mw", "energy_capital",
                 "p2h_capital", "p2h_om", "h2p_capital", "h2p_om"):
        if not _finite_nonneg(getattr(st, name)):
            bad(name, "require >= 0")
    if st.kind == "electrochemical" and not (st.eta_p2h == 1 and st.eta_h2p == 1):
        bad("eta_p2h", "electrochemical storage requires eta_p2h = eta_h2p = 1")
    return out


def _check_series(problem: PlanningProblem) -> List[Violation]:
    s = problem.series
    out = []
    T = s.horizon_hours
    if T < 1:
        out.append(Violation("series.horizon_hours", "require at least one hour"))
    if s.dt_hours != 1.0:
        out.append(Violation("series.dt_hours", "only 1-hour steps are supported"))
    for name in ("heat_demand_mw", "wind_cf", "solar_cf"):
        if getattr(s, name).shape[0] != T:
            out.append(Violation(f"series.{name}", f"length differs from demand ({T})"))
    for name in ("demand_mw", "heat_demand_mw", "wind_cf", "solar_cf"):
        arr = getattr(s, name)
        if not np.all(np.isfinite(arr)):
            out.append(Violation(f"series.{name}", "non-finite entries"))
        elif np.any(arr < 0):
            out.append(Violation(f"series.{name}", "negative entries"))
    for name in ("wind_cf", "solar_cf"):
        arr = getattr(s, name)
        if np.all(np.isfinite(arr)) and np.any(arr > 1):
            out.append(Violation(f"series.{name}", "capacity factor outside [0, 1]"))
    return out


def validate(problem: PlanningProblem) -> List[Violation]:
    """Return every broken invariant of ``problem``; empty when well formed."""
    out: List[Violation] = []
    T = problem.series.horizon_hours
    if len(problem.thermal_classes) < 1:
        out.append(Violation("thermal_classes", "at least one thermal class required"))
    seen = set()
    for k, cls in enumerate(problem.thermal_classes):
        where = f"thermal_classes[{k}]"
        if not cls.id or any(ch.isspace() for ch in cls.id):
            out.append(Violation(f"{where}.id", "must be non-empty without whitespace"))
        if cls.id in seen:
            out.append(Violation(f"{where}.id", f"duplicate id {cls.id!r}"))
        seen.add(cls.id)
        out.extend(_check_thermal(cls, where, T))
    n_chp = sum(1 for c in problem.thermal_classes if c.is_chp)
    if n_chp > 1:
        out.append(Violation("thermal_classes", "at most one CHP class is supported"))
    for kind, cls in zip(RENEWABLE_KINDS, (problem.wind, problem.solar)):
        out.extend(_check_renewable(cls, kind))
    if problem.storage is not None:
        out.extend(_check_storage(problem.storage))
    out.extend(_check_series(problem))
    heat = problem.series.heat_demand_mw
    if heat.size and np.nanmax(heat) > 0 and n_chp == 0:
        out.append(Violation("series.heat_demand_mw",
                             "heat demand present but no CHP class can serve it"))
    if not (0 <= problem.penetration_target < 1):
        out.append(Violation("penetration_target", "require 0 <= value < 1"))
    if not (math.isfinite(problem.discount_rate) and problem.discount_rate >= 0):
        out.append(Violation("discount_rate", "require finite value >= 0"))
    for key, years in problem.lifetimes.items():
        if not years >= 1:
            out.append(Violation(f"lifetimes.{key}", "require >= 1 year"))
    if problem.annual_cost_scale is not None and not problem.annual_cost_scale > 0:
        out.append(Violation("annual_cost_scale", "require > 0"))
    return out
