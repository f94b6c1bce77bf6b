from .defaults import ELECTROLYZERS, SCENARIO_STORAGE, default_renewables, default_thermal_classes, storage_presets
from .io import (
    ConfigError,
    example_config,
    load_config,
    problem_from_config,
    read_series_csv,
    series_to_csv,
    write_series_csv,
)
from .synthetic import gen_seasonal_series, season_windows, seasonal_envelope
from .types import (
    HOURS_PER_YEAR,
    PlanningProblem,
    RenewableClass,
    StorageTech,
    ThermalUnitClass,
    TimeSeriesBundle,
    amortize,
)
from .validation import Violation, validate

__all__ = [
    "ConfigError",
    "ELECTROLYZERS",
    "HOURS_PER_YEAR",
    "PlanningProblem",
    "RenewableClass",
    "SCENARIO_STORAGE",
    "StorageTech",
    "ThermalUnitClass",
    "TimeSeriesBundle",
    "Violation",
    "amortize",
    "default_renewables",
    "default_thermal_classes",
    "example_config",
    "gen_seasonal_series",
    "load_config",
    "problem_from_config",
    "read_series_csv",
    "season_windows",
    "seasonal_envelope",
    "series_to_csv",
    "storage_presets",
    "validate",
    "write_series_csv",
]
