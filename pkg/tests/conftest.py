import dataclasses

import numpy as np
import pytest

from cavernplan.domain import (
    PlanningProblem,
    TimeSeriesBundle,
    default_renewables,
    default_thermal_classes,
    gen_seasonal_series,
    storage_presets,
)

ACCEPTANCE = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (title, "PASS" if passed else "FAIL", detail)


def record_skip(number: int, title: str, detail: str) -> None:
    ACCEPTANCE[number] = (title, "SKIPPED", detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, verdict, detail = ACCEPTANCE[number]
        line = f"criterion {number} [{verdict}] {title}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)


def week_problem(storage_kind=None, rho=0.5):
    """The synthetic week used by the scenario studies (1000 MW base load)."""
    series = gen_seasonal_series(168, 1000.0, 0.35, 0.35, 7, heat_frac=0.1)
    storage = storage_presets(1000.0)[storage_kind] if storage_kind else None
    return PlanningProblem(default_thermal_classes(1000.0), *default_renewables(1000.0), storage, series, rho)


def day_problem(storage_kind="SCHSS", rho=0.5, seed=3):
    series = gen_seasonal_series(24, 100.0, 0.35, 0.35, seed, heat_frac=0.1)
    storage = storage_presets(100.0)[storage_kind] if storage_kind else None
    return PlanningProblem(default_thermal_classes(100.0), *default_renewables(100.0), storage, series, rho)


def single_class_problem(demand, *, wind_cf=None, solar_cf=None, storage=None, rho=0.0, **overrides):
    """One coal class, no heat, fixed renewables; easy to reason about by hand."""
    demand = np.asarray(demand, float)
    T = len(demand)
    coal = [c for c in default_thermal_classes(100.0) if c.id == "coal"][0]
    coal = dataclasses.replace(coal, **{"min_up_hours": 1, "min_down_hours": 1, **overrides})
    wind, solar = default_renewables(100.0)
    series = TimeSeriesBundle(demand, np.zeros(T),
                              np.zeros(T) if wind_cf is None else wind_cf,
                              np.zeros(T) if solar_cf is None else solar_cf)
    return PlanningProblem([coal], wind, solar, storage, series, rho)


@pytest.fixture
def tiny_problem():
    return day_problem()
