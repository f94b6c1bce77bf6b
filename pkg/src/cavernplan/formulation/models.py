from __future__ import annotations

from typing import Mapping, Tuple, Union

from ..domain.types import PlanningProblem
from ..domain.validation import validate
from .builders import (
    FormulationError,
    ModelContext,
    add_chp_and_heat,
    add_commitment_linking,
    add_energy_balance,
    add_hydrogen_system,
    add_min_up_down,
    add_output_bounds,
    add_penetration_floor,
    add_ramping,
    build_objective,
    declare_renewables,
    declare_storage,
    declare_thermal,
    hour_tag,
)
from .lp import EQ, LE, LinearProgram, VariableMap


def _check(problem: PlanningProblem) -> None:
    if problem.horizon < 1:
        raise FormulationError("horizon must contain at least one hour")
    problems = validate(problem)
    if problems:
        raise FormulationError("invalid problem: " + "; ".join(map(str, problems)))


def _shared(ctx: ModelContext) -> None:
    p = ctx.problem
    for cls in p.thermal_classes:
        add_commitment_linking(ctx, cls)
    add_output_bounds(ctx)
    for cls in p.thermal_classes:
        add_ramping(ctx, cls)
        add_min_up_down(ctx, cls)
    add_chp_and_heat(ctx)
    add_energy_balance(ctx)
    add_hydrogen_system(ctx)
    add_penetration_floor(ctx, p.penetration_target)
    build_objective(ctx)


def build_fast_model(problem: PlanningProblem) -> Tuple[LinearProgram, VariableMap]:
    """Continuous-commitment planning LP.

    Each thermal class is one aggregate with continuous online, start-up and
    shutdown capacity; every capacity is ``existing + new build``.
    """
    _check(problem)
    ctx = ModelContext(problem, LinearProgram("fast_uc"), VariableMap())
    for cls in problem.thermal_classes:
        declare_thermal(ctx, cls)
    declare_renewables(ctx)
    declare_storage(ctx)
    _shared(ctx)
    return ctx.lp, ctx.vmap


def build_oracle_model(problem: PlanningProblem,
                       units_per_class: Union[int, Mapping[str, int]]) -> Tuple[LinearProgram, VariableMap]:
    """Binary unit-commitment model with ``J`` identical units per thermal class.

    Thermal capacity is fixed at ``J * unit_size_mw``. Per unit ``j`` and hour
    the model has binary on/start/stop status and a continuous output with::

        x_j(t) - x_j(t-1) = s_j(t) - u_j(t),   s_j(t) + u_j(t) <= 1
        min_ratio * size * x_j(t) <= p_j(t) <= max_ratio * size * x_j(t)

    The class aggregates (online, start-up and shutdown capacity, output) are
    defined as sums over units and then pass through the same constraint
    families as the continuous model.
    """
    _check(problem)
    counts = {c.id: (units_per_class if isinstance(units_per_class, int) else units_per_class[c.id])
              for c in problem.thermal_classes}
    for cid, J in counts.items():
        if int(J) != J or J < 1:
            raise FormulationError(f"class {cid!r}: units_per_class must be a positive integer")
    ctx = ModelContext(problem, LinearProgram("oracle_uc"), VariableMap())
    T = problem.horizon
    for cls in problem.thermal_classes:
        J = counts[cls.id]
        declare_thermal(ctx, cls, fixed_capacity=J * cls.unit_size_mw)
        for j in range(J):
            unit = f"{cls.id}#{j}"
            for t in range(T):
                ctx.declare("commit", unit, t, 0.0, 1.0, integer=True)
                ctx.declare("start", unit, t, 0.0, 1.0, integer=True)
                ctx.declare("stop", unit, t, 0.0, 0.0 if t == 0 else 1.0, integer=True)
                ctx.declare("unit_output", unit, t)
    declare_renewables(ctx)
    declare_storage(ctx)

    lp, v = ctx.lp, ctx.v
    for cls in problem.thermal_classes:
        J = counts[cls.id]
        size = cls.unit_size_mw
        units = [f"{cls.id}#{j}" for j in range(J)]
        for t in range(T):
            tag = hour_tag(t)
            for unit in units:
                link = [(v("commit", unit, t), 1.0), (v("start", unit, t), -1.0), (v("stop", unit, t), 1.0)]
                if t > 0:
                    link.append((v("commit", unit, t - 1), -1.0))
                lp.add_constraint(f"eq01.status.{unit}.{tag}", link, EQ, 0.0)
                lp.add_constraint(f"eq01.exclusive.{unit}.{tag}",
                                  [(v("start", unit, t), 1.0), (v("stop", unit, t), 1.0)], LE, 1.0)
                out, on = v("unit_output", unit, t), v("commit", unit, t)
                lp.add_constraint(f"eq02.min.{unit}.{tag}",
                                  [(on, cls.min_output_ratio * size), (out, -1.0)], LE, 0.0)
                lp.add_constraint(f"eq02.max.{unit}.{tag}",
                                  [(out, 1.0), (on, -cls.max_output_ratio * size)], LE, 0.0)
            for tag_eq, agg, role in (("eq03.online", "online_cap", "commit"),
                                      ("eq04.startup", "startup", "start"),
                                      ("eq05.shutdown", "shutdown", "stop")):
                lp.add_constraint(f"{tag_eq}.{cls.id}.{tag}",
                                  [(v(agg, cls.id, t), 1.0)] + [(v(role, u, t), -size) for u in units],
                                  EQ, 0.0)
            lp.add_constraint(f"agg.output.{cls.id}.{tag}",
                              [(v("thermal_output", cls.id, t), 1.0)]
                              + [(v("unit_output", u, t), -1.0) for u in units], EQ, 0.0)
    _shared(ctx)
    return ctx.lp, ctx.vmap


def fixed_capacity_problem(problem: PlanningProblem,
                           units_per_class: Union[int, Mapping[str, int]]) -> PlanningProblem:
    """Copy of ``problem`` with thermal capacity frozen at ``J * unit_size`` and no expansion.

    This is the instance on which the continuous model and the binary oracle
    are compared.
    """
    from dataclasses import replace

    thermal = []
    for cls in problem.thermal_classes:
        J = units_per_class if isinstance(units_per_class, int) else units_per_class[cls.id]
        thermal.append(replace(cls, existing_capacity_mw=J * cls.unit_size_mw, max_new_mw=0.0))
    wind = replace(problem.wind, max_new_mw=0.0)
    solar = replace(problem.solar, max_new_mw=0.0)
    return replace(problem, thermal_classes=thermal, wind=wind, solar=solar)
