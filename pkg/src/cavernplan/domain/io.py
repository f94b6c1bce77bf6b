"""JSON config and CSV time-series readers/writers."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, fields
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Optional, Union

import jsonschema
import numpy as np

from .defaults import default_renewables, default_thermal_classes, storage_presets
from .types import (
    DEFAULT_LIFETIMES,
    PlanningProblem,
    RenewableClass,
    StorageTech,
    ThermalUnitClass,
    TimeSeriesBundle,
)

SCHEMA_VERSION = 1
SERIES_HEADER = ("t", "load_mw", "heat_mw", "wind_cf", "solar_cf")
STORAGE_KEYS = ("bau", "hss", "schss")

PathLike = Union[str, Path]


class ConfigError(ValueError):
    """Raised for malformed config or series input."""


def load_schema(name: str) -> dict:
    text = resources.files("cavernplan.schemas").joinpath(name).read_text()
    return json.loads(text)


# JSON has no infinity; unbounded limits are written as null.
def _encode(value):
    if isinstance(value, float) and math.isinf(value):
        return None
    return value


def _dataclass_to_json(obj) -> dict:
    return {k: _encode(v) for k, v in asdict(obj).items()}


def _build(cls, data: dict, where: str):
    names = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(names)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if value is None and names[key].default == math.inf:
            value = math.inf
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def example_config(base_load_mw: float = 1000.0, penetration: float = 0.5) -> dict:
    wind, solar = default_renewables(base_load_mw)
    return {
        "schema_version": SCHEMA_VERSION,
        "thermal_classes": [_dataclass_to_json(c) for c in default_thermal_classes(base_load_mw)],
        "wind": _dataclass_to_json(wind),
        "solar": _dataclass_to_json(solar),
        "storage": {k.lower(): _dataclass_to_json(v) for k, v in storage_presets(base_load_mw).items()},
        "policy": {
            "penetration_target": penetration,
            "discount_rate": 0.05,
            "lifetimes": dict(DEFAULT_LIFETIMES),
            "annual_cost_scale": None,
        },
    }


def validate_config(config: dict) -> None:
    try:
        jsonschema.validate(config, load_schema("config.schema.json"))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config {path}: {exc.message}") from None


def load_config(path: PathLike) -> dict:
    try:
        config = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    validate_config(config)
    return config


def storage_from_config(config: dict, kind: str) -> Optional[StorageTech]:
    key = kind.lower()
    if key == "none":
        return None
    if key not in STORAGE_KEYS:
        raise ConfigError(f"unknown storage scenario {kind!r}")
    table = config.get("storage", {})
    if key not in table:
        raise ConfigError(f"config has no storage entry {key!r}")
    return _build(StorageTech, table[key], f"storage.{key}")


def problem_from_config(config: dict, series: TimeSeriesBundle, storage: str = "schss",
                        penetration: Optional[float] = None) -> PlanningProblem:
    validate_config(config)
    thermal = [_build(ThermalUnitClass, c, f"thermal_classes[{k}]")
               for k, c in enumerate(config["thermal_classes"])]
    wind = _build(RenewableClass, config["wind"], "wind")
    solar = _build(RenewableClass, config["solar"], "solar")
    policy = config.get("policy", {})
    rho = policy.get("penetration_target", 0.0) if penetration is None else penetration
    return PlanningProblem(
        thermal_classes=thermal,
        wind=wind,
        solar=solar,
        storage=storage_from_config(config, storage),
        series=series,
        penetration_target=rho,
        discount_rate=policy.get("discount_rate", 0.05),
        lifetimes=policy.get("lifetimes", {}),
        annual_cost_scale=policy.get("annual_cost_scale"),
    )


def format_sig(value: float, digits: int = 6) -> str:
    text = f"{value:.{digits}g}"
    return "0" if text == "-0" else text


def series_to_csv(series: TimeSeriesBundle) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_HEADER)
    for t in range(series.horizon_hours):
        writer.writerow([t] + [format_sig(float(a[t])) for a in (
            series.demand_mw, series.heat_demand_mw, series.wind_cf, series.solar_cf)])
    return buf.getvalue()


def write_series_csv(series: TimeSeriesBundle, path: PathLike) -> None:
    Path(path).write_text(series_to_csv(series))


def read_series_csv(path: PathLike) -> TimeSeriesBundle:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read series {path}: {exc}") from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(h.strip() for h in rows[0]) != SERIES_HEADER:
        raise ConfigError(f"series header must be {','.join(SERIES_HEADER)}")
    body = [r for r in rows[1:] if r]
    if not body:
        raise ConfigError("series has no data rows")
    try:
        data = np.array([[float(x) for x in r] for r in body])
    except ValueError as exc:
        raise ConfigError(f"non-numeric series value: {exc}") from None
    if data.shape[1] != len(SERIES_HEADER):
        raise ConfigError("series rows must have 5 columns")
    if not np.array_equal(data[:, 0], np.arange(len(body))):
        raise ConfigError("series column t must run 0, 1, 2, ...")
    return TimeSeriesBundle(data[:, 1], data[:, 2], data[:, 3], data[:, 4])


def config_to_json(config: Dict[str, Any]) -> str:
    return json.dumps(config, indent=2, sort_keys=True) + "\n"
