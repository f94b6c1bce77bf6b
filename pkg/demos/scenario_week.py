"""BAU, HSS and SCHSS on a synthetic 168-hour week.

    python3 demos/scenario_week.py [--base-load 1000] [--levels 0.2 0.5 0.8]

Prints cost, emissions, curtailment and new renewable capacity per cell,
then how SCHSS compares with the other two scenarios.
"""

import argparse

from cavernplan.domain import (
    PlanningProblem,
    default_renewables,
    default_thermal_classes,
    gen_seasonal_series,
    storage_presets,
)
from cavernplan.engine import run_comparison, scenario_specs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base-load", type=float, default=1000.0)
    ap.add_argument("--levels", type=float, nargs="+", default=[0.2, 0.5, 0.8])
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    base = args.base_load
    series = gen_seasonal_series(168, base, 0.35, 0.35, args.seed, heat_frac=0.1)
    template = PlanningProblem(default_thermal_classes(base), *default_renewables(base), None, series, 0.0)
    report = run_comparison(scenario_specs(template, storage_presets(base), args.levels))

    print(f"{'scenario':8} {'rho':>4} {'cost $':>12} {'tCO2':>9} {'curt MWh':>9} {'new RE MW':>9}")
    for row in report.rows:
        s = row["summary"]
        print(f"{row['scenario']:8} {row['penetration']:4.1f} {s['total_cost']:12.0f} {s['emissions_tco2']:9.0f} "
              f"{s['curtailed_mwh']:9.0f} {s['renewable_new_mw']:9.0f}")
    print()
    for d in report.deltas:
        if d["scenario"] != d["reference"]:
            # positive means the reference scenario is lower
            changes = ", ".join(f"{k[:-4]} -{v:.1f}%" if v >= 0 else f"{k[:-4]} +{-v:.1f}%"
                                for k, v in d.items() if k.endswith("_pct") and v is not None)
            print(f"{d['reference']} vs {d['scenario']} at rho={d['penetration']}: {changes}")


if __name__ == "__main__":
    main()
