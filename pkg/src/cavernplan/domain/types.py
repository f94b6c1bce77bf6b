"""Immutable input types for the planning model.

Units follow the conventions used throughout the package: capacities in MW
(storage energy in MWh), capital costs in $/kW, annualised costs in $/kW-yr
(storage energy in $/kWh-yr), fuel costs in $/MWh and start-up costs in $/MW.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

HOURS_PER_YEAR = 8760.0

STORAGE_KINDS = ("electrochemical", "tank", "salt_cavern")
RENEWABLE_KINDS = ("wind", "solar")


def amortize(capital: float, lifetime: float, discount_rate: float) -> float:
    """Equivalent annual cost of ``capital`` via the capital recovery factor.

    Straight-line ``capital / lifetime`` when ``discount_rate`` is zero.
    """
    for name, value in (("capital", capital), ("lifetime", lifetime),
                        ("discount_rate", discount_rate)):
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
    if capital < 0:
        raise ValueError("capital must be >= 0")
    if lifetime < 1:
        raise ValueError("lifetime must be >= 1 year")
    if discount_rate < 0:
        raise ValueError("discount_rate must be >= 0")
    if discount_rate == 0:
        return capital / lifetime
    growth = (1.0 + discount_rate) ** lifetime
    return capital * discount_rate * growth / (growth - 1.0)


@dataclass(frozen=True)
class ThermalUnitClass:
    id: str
    existing_capacity_mw: float
    capital_cost: float
    om_cost_frac: float
    fuel_cost: float
    startup_cost: float
    max_output_ratio: float
    min_output_ratio: float
    ramp_up_ratio: float
    ramp_down_ratio: float
    startup_ramp_ratio: float
    shutdown_ramp_ratio: float
    min_up_hours: int
    min_down_hours: int
    emission_factor: float = 0.0
    is_chp: bool = False
    thermoelectric_ratio: Optional[float] = None
    unit_size_mw: float = 100.0
    amortized_capital: Optional[float] = None
    # upper bound on new build; 0 freezes the class at its existing capacity
    max_new_mw: float = math.inf

    @property
    def om_cost(self) -> float:
        """Fixed O&M in $/kW-yr."""
        return self.om_cost_frac * self.capital_cost


@dataclass(frozen=True)
class RenewableClass:
    kind: str
    existing_capacity_mw: float
    capital_cost: float
    om_cost: float
    amortized_capital: Optional[float] = None
    max_new_mw: float = math.inf


@dataclass(frozen=True)
class StorageTech:
    """One storage technology.

    Hydrogen kinds convert electricity to hydrogen (``eta_p2h``) and back
    (``eta_h2p``); the electrochemical kind reuses the same structure with both
    conversion efficiencies equal to one, so the converter capacities become
    charge and discharge power ratings.
    """

    kind: str
    energy_capital: float
    p2h_capital: float
    p2h_om: float
    h2p_capital: float
    h2p_om: float
    eta_p2h: float
    eta_h2p: float
    eta_in: float
    eta_out: float
    leak_rate_per_hour: float = 0.0
    max_flow_in_mw: float = math.inf
    max_flow_out_mw: float = math.inf
    energy_cap_limit_mwh: float = math.inf
    initial_soc_frac: float = 0.0
    p2h_min_load_frac: float = 0.0
    p2h_cap_limit_mw: float = math.inf
    h2p_cap_limit_mw: float = math.inf


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeriesBundle:
    demand_mw: np.ndarray
    heat_demand_mw: np.ndarray
    wind_cf: np.ndarray
    solar_cf: np.ndarray
    dt_hours: float = 1.0

    def __post_init__(self):
        for name in ("demand_mw", "heat_demand_mw", "wind_cf", "solar_cf"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def horizon_hours(self) -> int:
        return int(self.demand_mw.shape[0])

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesBundle):
            return NotImplemented
        return self.dt_hours == other.dt_hours and all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ("demand_mw", "heat_demand_mw", "wind_cf", "solar_cf")
        )

    __hash__ = None

    @classmethod
    def constant(cls, hours: int, demand: float, *, heat: float = 0.0,
                 wind: float = 0.0, solar: float = 0.0) -> "TimeSeriesBundle":
        return cls(np.full(hours, demand), np.full(hours, heat),
                   np.full(hours, wind), np.full(hours, solar))


DEFAULT_LIFETIMES = {
    "thermal": 30.0, "wind": 25.0, "solar": 25.0,
    "storage": 25.0, "p2h": 25.0, "h2p": 20.0,
}


@dataclass(frozen=True)
class PlanningProblem:
    thermal_classes: Sequence[ThermalUnitClass]
    wind: RenewableClass
    solar: RenewableClass
    storage: Optional[StorageTech]
    series: TimeSeriesBundle
    penetration_target: float = 0.0
    discount_rate: float = 0.05
    lifetimes: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_LIFETIMES))
    # share of a year represented by the horizon; None means horizon / 8760
    annual_cost_scale: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "thermal_classes", tuple(self.thermal_classes))
        object.__setattr__(self, "lifetimes", {**DEFAULT_LIFETIMES, **self.lifetimes})

    @property
    def horizon(self) -> int:
        return self.series.horizon_hours

    @property
    def cost_scale(self) -> float:
        if self.annual_cost_scale is not None:
            return float(self.annual_cost_scale)
        return self.series.horizon_hours * self.series.dt_hours / HOURS_PER_YEAR

    @property
    def chp_class(self) -> Optional[ThermalUnitClass]:
        for cls in self.thermal_classes:
            if cls.is_chp:
                return cls
        return None

    def thermal_annuity(self, cls: ThermalUnitClass) -> float:
        """a^i in $/kW-yr."""
        if cls.amortized_capital is not None:
            return cls.amortized_capital
        return amortize(cls.capital_cost, self.lifetimes["thermal"], self.discount_rate)

    def renewable_annuity(self, cls: RenewableClass) -> float:
        if cls.amortized_capital is not None:
            return cls.amortized_capital
        return amortize(cls.capital_cost, self.lifetimes[cls.kind], self.discount_rate)

    def replace(self, **changes) -> "PlanningProblem":
        from dataclasses import replace

        return replace(self, **changes)
