"""Reference external solver: ``python -m cavernplan.solver.highs_cmd MODEL.mps OUT.sol``.

Reads an MPS file, solves it with the HiGHS codes shipped in SciPy and writes
the solution-file format understood by :mod:`cavernplan.solver.external`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from scipy.optimize import Bounds, LinearConstraint, milp

from .external import write_solution
from .mps import parse_mps
from .simplex import row_bounds

_STATUS = {0: "optimal", 1: "iteration_limit", 2: "infeasible", 3: "unbounded"}


def solve_file(mps_path, sol_path) -> str:
    lp = parse_mps(Path(mps_path).read_text())
    c, A, senses, rhs, lb, ub, integer = lp.arrays()
    lo, hi = row_bounds(senses, rhs)
    constraints = [LinearConstraint(A, lo, hi)] if A.shape[0] else []
    res = milp(c, constraints=constraints, bounds=Bounds(lb, ub), integrality=integer.astype(int))
    status = _STATUS.get(res.status, "iteration_limit")
    values = {}
    objective = None
    if status == "optimal":
        values = dict(zip(lp.var_names, (float(v) for v in res.x)))
        objective = float(res.fun) + lp.objective_offset
    write_solution(sol_path, status, values, objective)
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m cavernplan.solver.highs_cmd",
                                     description="Solve an MPS model with SciPy's HiGHS.")
    parser.add_argument("mps")
    parser.add_argument("sol")
    args = parser.parse_args(argv)
    solve_file(args.mps, args.sol)
    return 0


if __name__ == "__main__":
    sys.exit(main())
