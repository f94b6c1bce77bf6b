"""Default parameter sets.

Thermal capital cost, O&M share, start-up cost and minimum up time come from
the Jiangsu unit table (coal, CHP, gas). Electrolyser figures are the 2030
alkaline (AEC) values: 604 $/kW, 30 $/kW/yr, 25-year life. Everything else
(fuel prices, which fold in a carbon charge, ramp ratios, emission factors,
renewable and fuel-cell costs, storage energy costs) is an assumption chosen to give plausible desk-scale
studies; override through the JSON config.
"""

from __future__ import annotations

import math
from typing import Dict, List

from .types import RenewableClass, StorageTech, ThermalUnitClass, amortize

ELECTROLYZERS = {
    # capital $/kW, O&M $/kW/yr, partial-load floor, lifetime yr
    "AEC": (604.0, 30.0, 0.20, 25),
    "PEMEC": (659.0, 33.0, 0.05, 15),
    "SOEC": (659.0, 20.0, 0.00, 20),
}

SCENARIO_STORAGE = {
    "BAU": "electrochemical",
    "HSS": "tank",
    "SCHSS": "salt_cavern",
}


def default_thermal_classes(base_load_mw: float = 1000.0) -> List[ThermalUnitClass]:
    coal = ThermalUnitClass(
        id="coal", existing_capacity_mw=0.45 * base_load_mw,
        capital_cost=621.0, om_cost_frac=0.021, fuel_cost=90.0, startup_cost=147.0,
        max_output_ratio=1.0, min_output_ratio=0.4, ramp_up_ratio=0.3, ramp_down_ratio=0.3,
        startup_ramp_ratio=0.5, shutdown_ramp_ratio=0.5, min_up_hours=8, min_down_hours=8,
        emission_factor=0.95, unit_size_mw=0.1 * base_load_mw,
    )
    chp = ThermalUnitClass(
        id="chp", existing_capacity_mw=0.15 * base_load_mw,
        capital_cost=621.0, om_cost_frac=0.021, fuel_cost=96.0, startup_cost=147.0,
        max_output_ratio=1.0, min_output_ratio=0.4, ramp_up_ratio=0.3, ramp_down_ratio=0.3,
        startup_ramp_ratio=0.5, shutdown_ramp_ratio=0.5, min_up_hours=8, min_down_hours=8,
        emission_factor=0.80, is_chp=True, thermoelectric_ratio=0.75,
        unit_size_mw=0.05 * base_load_mw,
    )
    gas = ThermalUnitClass(
        id="gas", existing_capacity_mw=0.2 * base_load_mw,
        capital_cost=524.0, om_cost_frac=0.026, fuel_cost=165.0, startup_cost=88.0,
        max_output_ratio=1.0, min_output_ratio=0.2, ramp_up_ratio=0.8, ramp_down_ratio=0.8,
        startup_ramp_ratio=1.0, shutdown_ramp_ratio=1.0, min_up_hours=1, min_down_hours=1,
        emission_factor=0.40, unit_size_mw=0.05 * base_load_mw,
    )
    return [coal, chp, gas]


def default_renewables(base_load_mw: float = 1000.0):
    wind = RenewableClass("wind", existing_capacity_mw=0.1 * base_load_mw,
                          capital_cost=600.0, om_cost=30.0)
    solar = RenewableClass("solar", existing_capacity_mw=0.1 * base_load_mw,
                           capital_cost=300.0, om_cost=12.0)
    return wind, solar


def _hydrogen(kind: str, energy_capital_kwh: float, energy_life: float, discount_rate: float,
              electrolyzer: str = "AEC", **overrides) -> StorageTech:
    cap, om, _floor, life = ELECTROLYZERS[electrolyzer]
    params = dict(
        kind=kind,
        energy_capital=amortize(energy_capital_kwh, energy_life, discount_rate),
        p2h_capital=amortize(cap, life, discount_rate),
        p2h_om=om,
        h2p_capital=amortize(700.0, 20, discount_rate),
        h2p_om=20.0,
        eta_p2h=0.70,
        eta_h2p=0.55,
        eta_in=0.98,
        eta_out=0.98,
        initial_soc_frac=0.5,
    )
    params.update(overrides)
    return StorageTech(**params)


def storage_presets(base_load_mw: float = 1000.0, discount_rate: float = 0.05) -> Dict[str, StorageTech]:
    """Storage technologies for the BAU, HSS and SCHSS scenarios.

    Energy capital is ordered salt cavern < tank < battery. Tanks carry
    injection/extraction caps at 3% of the base load.
    """
    bau = StorageTech(
        kind="electrochemical",
        energy_capital=amortize(600.0, 10, discount_rate),
        p2h_capital=amortize(150.0, 15, discount_rate),
        p2h_om=5.0,
        h2p_capital=amortize(150.0, 15, discount_rate),
        h2p_om=5.0,
        eta_p2h=1.0, eta_h2p=1.0, eta_in=0.95, eta_out=0.95,
        leak_rate_per_hour=1e-4, initial_soc_frac=0.5,
    )
    hss = _hydrogen("tank", 15.0, 20, discount_rate, leak_rate_per_hour=1e-4,
                    max_flow_in_mw=0.03 * base_load_mw, max_flow_out_mw=0.03 * base_load_mw)
    schss = _hydrogen("salt_cavern", 1.0, 40, discount_rate, leak_rate_per_hour=1e-6,
                      max_flow_in_mw=math.inf, max_flow_out_mw=math.inf)
    return {"BAU": bau, "HSS": hss, "SCHSS": schss}
