"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 infeasible or unbounded model,
3 solver iteration or node limit.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .domain import (
    ConfigError,
    example_config,
    gen_seasonal_series,
    load_config,
    problem_from_config,
    read_series_csv,
    series_to_csv,
    validate,
)
from .domain.io import STORAGE_KEYS, config_to_json, storage_from_config
from .engine import (
    PlanError,
    ScenarioSpec,
    comparison_files,
    plan_files,
    random_family,
    run_comparison,
    run_plan,
    verify_fast_uc,
    write_files,
)
from .engine.compare import SCENARIOS
from .engine.verify import FAMILIES
from .formulation import build_fast_model
from .solver import ITERATION_LIMIT, ExternalSolverError, export_mps

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3
MANIFEST = "manifest.json"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; input errors here are exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        try:
            moment = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc)
        except ValueError:
            raise InputError(f"SOURCE_DATE_EPOCH must be an integer, got {epoch!r}") from None
    else:
        moment = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0)
    return moment.isoformat()


def _manifest(args, files: Dict[str, str]) -> str:
    data = {
        "command": args.command,
        "arguments": {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "func")},
        "config": getattr(args, "config", None),
        "series": getattr(args, "series", None),
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "output_directory": args.out,
        "timestamps": {"created": _timestamp()},
        "outputs": {name: hashlib.sha256(text.encode()).hexdigest() for name, text in sorted(files.items())},
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(args, files: Dict[str, str], timings: Optional[dict] = None) -> None:
    files = dict(files)
    if timings is not None:
        files["timings.json"] = json.dumps(timings, indent=2, sort_keys=True) + "\n"
    files[MANIFEST] = _manifest(args, files)
    write_files(Path(args.out), files)


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    value = _float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _load_inputs(args):
    config = load_config(args.config)
    series = read_series_csv(args.series)
    return config, series


def _check_problem(problem) -> None:
    problems = validate(problem)
    if problems:
        raise InputError("; ".join(str(v) for v in problems))


# commands -------------------------------------------------------------------

def cmd_gen_data(args) -> int:
    try:
        series = gen_seasonal_series(args.hours, args.base_load, args.summer_peak, args.winter_peak,
                                     args.seed, heat_frac=args.heat_frac)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, {"series.csv": series_to_csv(series)})
    return EXIT_OK


def cmd_example_config(args) -> int:
    if not 0.0 <= args.penetration < 1.0:
        raise InputError("penetration: require 0 <= value < 1")
    _emit(args, {"config.json": config_to_json(example_config(args.base_load, args.penetration))})
    return EXIT_OK


def cmd_plan(args) -> int:
    config, series = _load_inputs(args)
    problem = problem_from_config(config, series, args.storage, args.penetration)
    _check_problem(problem)
    if args.export_mps:
        lp, _ = build_fast_model(problem)
        _emit(args, {"model.mps": export_mps(lp)})
        return EXIT_OK
    t0 = time.perf_counter()
    try:
        solution = run_plan(problem, solver=args.solver)
    except PlanError as exc:
        diag = {"status": exc.status, "message": str(exc), "diagnostics": exc.diagnostics}
        _emit(args, {"diagnostics.json": json.dumps(diag, indent=2, sort_keys=True) + "\n"})
        print(f"plan failed: {exc}", file=sys.stderr)
        return EXIT_LIMIT if exc.status == ITERATION_LIMIT else EXIT_INFEASIBLE
    timings = {"plan_seconds": time.perf_counter() - t0} if args.timings else None
    _emit(args, plan_files(solution, problem, args.storage), timings)
    print(f"optimal: total cost {solution.total_cost:.6g} $, emissions {solution.emissions_tco2:.6g} tCO2, "
          f"curtailment {solution.curtailed_mwh:.6g} MWh")
    return EXIT_OK


def cmd_compare(args) -> int:
    config, series = _load_inputs(args)
    template = problem_from_config(config, series, "none", 0.0)
    specs = []
    for kind in SCENARIOS:
        storage = storage_from_config(config, kind.lower())
        try:
            specs.append(ScenarioSpec(kind, storage, tuple(args.penetrations), template))
        except ValueError as exc:
            raise InputError(f"penetrations: {exc}") from None
        for rho in args.penetrations:
            _check_problem(specs[-1].problem(rho))
    t0 = time.perf_counter()
    try:
        report = run_comparison(specs, solver=args.solver, workers=args.workers)
    except PlanError as exc:
        diag = {"status": exc.status, "message": str(exc), "diagnostics": exc.diagnostics}
        _emit(args, {"diagnostics.json": json.dumps(diag, indent=2, sort_keys=True) + "\n"})
        print(f"comparison failed: {exc}", file=sys.stderr)
        return EXIT_LIMIT if exc.status == ITERATION_LIMIT else EXIT_INFEASIBLE
    timings = {"compare_seconds": time.perf_counter() - t0} if args.timings else None
    _emit(args, comparison_files(report), timings)
    for d in report.deltas:
        if d["scenario"] != "SCHSS":
            print(f"rho={d['penetration']:g} SCHSS vs {d['scenario']}: cost {_pct(d['cost_pct'])}, "
                  f"emissions {_pct(d['emissions_pct'])}, curtailment {_pct(d['curtailment_pct'])}")
    return EXIT_OK


def _pct(value) -> str:
    return "n/a" if value is None else f"{-value:+.3g}%"


def cmd_verify_fastuc(args) -> int:
    try:
        family = random_family(args.instances, args.seed, [args.units], [args.hours], args.classes, args.family)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    table = verify_fast_uc(family)
    files = {"verification.json": table.to_json(args.timings), "verification.csv": table.to_csv(args.timings)}
    _emit(args, files)
    median = table.median_gap
    print(f"{len(table.solved())}/{len(table.rows)} instances solved; median relative gap "
          f"{'n/a' if median is None else format(median, '.6g')}")
    if any(r.status == ITERATION_LIMIT for r in table.rows):
        return EXIT_LIMIT
    return EXIT_OK


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cavernplan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", help="write a synthetic double-peak series CSV")
    p.add_argument("--hours", type=_positive_int, default=168)
    p.add_argument("--base-load", type=_nonneg_float, default=1000.0)
    p.add_argument("--summer-peak", type=_nonneg_float, default=0.35)
    p.add_argument("--winter-peak", type=_nonneg_float, default=0.35)
    p.add_argument("--heat-frac", type=_nonneg_float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("example-config", help="write the default parameter set as config JSON")
    p.add_argument("--base-load", type=_nonneg_float, default=1000.0)
    p.add_argument("--penetration", type=_float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_example_config)

    solver_help = "in-repo simplex, or the MPS hand-off configured by CAVERNPLAN_SOLVER_CMD"
    p = sub.add_parser("plan", help="solve one planning instance")
    p.add_argument("--config", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--storage", choices=("none",) + STORAGE_KEYS, default="schss")
    p.add_argument("--penetration", type=_float, default=None)
    p.add_argument("--solver", choices=("simplex", "external"), default="simplex", help=solver_help)
    p.add_argument("--export-mps", action="store_true", help="write model.mps instead of solving")
    p.add_argument("--timings", action="store_true", help="also write timings.json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="BAU, HSS and SCHSS across penetration levels")
    p.add_argument("--config", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--penetrations", type=_float, nargs="+", default=[0.2, 0.5, 0.8])
    p.add_argument("--solver", choices=("simplex", "external"), default="simplex", help=solver_help)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--timings", action="store_true", help="also write timings.json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify-fastuc", help="fast continuous UC against the binary oracle")
    p.add_argument("--units", type=_positive_int, default=2)
    p.add_argument("--hours", type=_positive_int, default=6)
    p.add_argument("--instances", type=_positive_int, default=5)
    p.add_argument("--family", choices=FAMILIES, default="random")
    p.add_argument("--classes", type=int, choices=(1, 2), default=None, help="random family only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="add wall-time columns (not reproducible)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify_fastuc)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"cavernplan {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ExternalSolverError as exc:
        print(f"cavernplan {args.command}: external solver: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
