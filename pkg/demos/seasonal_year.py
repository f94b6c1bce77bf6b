"""SCHSS over a full synthetic year through an external solver.

    export CAVERNPLAN_SOLVER_CMD="python3 -m cavernplan.solver.highs_cmd {mps} {sol}"
    python3 demos/seasonal_year.py [--rho 0.5]

The year model is too large for the in-repo simplex. It is exported as MPS and
handed to the configured command, which takes several minutes with the
bundled HiGHS wrapper. Prints the cavern size and mean state of charge per
quarter window.
"""

import argparse
import sys

from cavernplan.domain import (
    PlanningProblem,
    default_renewables,
    default_thermal_classes,
    gen_seasonal_series,
    season_windows,
    storage_presets,
)
from cavernplan.engine import run_plan
from cavernplan.solver import configured_command, solve_external


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rho", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    command = configured_command()
    if command is None:
        sys.exit("set CAVERNPLAN_SOLVER_CMD first (see the module docstring)")

    series = gen_seasonal_series(8760, 1000.0, 0.35, 0.35, args.seed, heat_frac=0.1)
    problem = PlanningProblem(default_thermal_classes(1000.0), *default_renewables(1000.0),
                              storage_presets(1000.0)["SCHSS"], series, args.rho)
    plan = run_plan(problem, solver=lambda lp: solve_external(lp, command))

    print(f"total cost {plan.total_cost:.4g} $, emissions {plan.emissions_tco2:.4g} t, "
          f"cavern {plan.soc_series.max():.0f} MWh peak stock")
    for name, window in season_windows(8760).items():
        print(f"{name:16} mean SoC {plan.soc_series[window].mean():8.0f} MWh")


if __name__ == "__main__":
    main()
