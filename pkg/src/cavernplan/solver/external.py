"""Hand a model to an external solver through MPS files.

The command comes from the ``CAVERNPLAN_SOLVER_CMD`` environment variable (or
an explicit argument). It is a single string with ``{mps}`` and ``{sol}``
placeholders, for example::

    CAVERNPLAN_SOLVER_CMD="python -m cavernplan.solver.highs_cmd {mps} {sol}"

The solver must write a solution file made of ``var_name value`` lines.
Lines starting with ``#`` are comments, except ``# status <word>`` which
reports one of optimal, infeasible, unbounded or iteration_limit. Variables
missing from the file are taken as zero.
"""

from __future__ import annotations

import math
import os
import shlex
import subprocess
import tempfile
import time
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from .mps import export_mps
from .simplex import OPTIMAL, STATUSES, SolveResult

SOLVER_ENV = "CAVERNPLAN_SOLVER_CMD"


class ExternalSolverError(RuntimeError):
    pass


def configured_command() -> Optional[str]:
    cmd = os.environ.get(SOLVER_ENV, "").strip()
    return cmd or None


def write_solution(path, status: str, values: Dict[str, float], objective: Optional[float] = None) -> None:
    lines = [f"# status {status}"]
    if objective is not None:
        lines.append(f"# objective {objective!r}")
    lines += [f"{name} {value!r}" for name, value in values.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_solution(text: str) -> Tuple[str, Dict[str, float]]:
    status = None
    values: Dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "status":
                status = parts[1]
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ExternalSolverError(f"solution line {lineno}: expected 'name value'")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            raise ExternalSolverError(f"solution line {lineno}: bad value {parts[1]!r}") from None
    if status is None:
        status = OPTIMAL if values else "infeasible"
    if status not in STATUSES:
        raise ExternalSolverError(f"unknown status {status!r} in solution file")
    return status, values


def solve_external(lp, command: Optional[str] = None, timeout: Optional[float] = None) -> SolveResult:
    """Write ``lp`` as MPS, run the configured command and read its solution file."""
    command = command or configured_command()
    if not command:
        raise ExternalSolverError(f"no external solver configured (set {SOLVER_ENV})")
    if "{mps}" not in command or "{sol}" not in command:
        raise ExternalSolverError("solver command needs {mps} and {sol} placeholders")
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="cavernplan-") as tmp:
        mps_path = Path(tmp) / "model.mps"
        sol_path = Path(tmp) / "model.sol"
        mps_path.write_text(export_mps(lp))
        argv = [part.format(mps=str(mps_path), sol=str(sol_path)) for part in shlex.split(command)]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ExternalSolverError(f"external solver failed to run: {exc}") from exc
        if proc.returncode != 0 or not sol_path.exists():
            raise ExternalSolverError(
                f"external solver exited with {proc.returncode}: {proc.stderr.strip()[-500:]}")
        status, values = read_solution(sol_path.read_text())
    wall = time.perf_counter() - t0
    if status != OPTIMAL:
        return SolveResult(status, math.nan, None, 0, wall)
    unknown = set(values) - set(lp.var_names)
    if unknown:
        raise ExternalSolverError(f"solution names unknown variables, e.g. {sorted(unknown)[:3]}")
    x = np.array([values.get(name, 0.0) for name in lp.var_names])
    return SolveResult(OPTIMAL, lp.objective_value(x), x, 0, wall)
