"""Constraint-family builders shared by the fast and oracle models.

Hours are 0-based. Row names carry the equation tag first, e.g.
``eq26.balance.t0042`` or ``eq17.ramp_cap.coal.t0003``; variables are named
``var.<role>.<owner>.t<hour>`` (``var.<role>.<owner>`` for capacities).

Boundary conventions: the system starts cold (no online capacity, output or
start-up history before hour 0, so shutdown at hour 0 is fixed at zero), and no
shutdown is assumed after the last hour.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from ..domain.types import HOURS_PER_YEAR, PlanningProblem, ThermalUnitClass
from .lp import EQ, GE, INF, LE, LinearProgram, VariableMap

KW_PER_MW = 1000.0

# objective component labels
W_INVEST, W_FIXED, W_VARIABLE, W_STORAGE = "W_a", "W_f", "W_v", "W_h"
COST_TERMS = (W_INVEST, W_FIXED, W_VARIABLE, W_STORAGE)


class FormulationError(ValueError):
    pass


def hour_tag(t: int) -> str:
    return f"t{t:04d}"


@dataclass
class ModelContext:
    """Model under construction: problem, LP, variable map and capacity expressions.

    A capacity expression is ``(constant MW, new-build column or None)``.
    """

    problem: PlanningProblem
    lp: LinearProgram
    vmap: VariableMap
    capacity: Dict[str, Tuple[float, Optional[int]]] = field(default_factory=dict)

    @property
    def T(self) -> int:
        return self.problem.horizon

    @property
    def dt(self) -> float:
        return self.problem.series.dt_hours

    def hours(self, t_range: Optional[Iterable[int]] = None):
        return range(self.T) if t_range is None else t_range

    def var_name(self, role: str, owner: Optional[str], hour: Optional[int] = None) -> str:
        parts = ["var", role]
        if owner is not None:
            parts.append(owner)
        if hour is not None:
            parts.append(hour_tag(hour))
        return ".".join(parts)

    def declare(self, role: str, owner: Optional[str], hour: Optional[int],
                lb: float = 0.0, ub: float = INF, integer: bool = False) -> int:
        idx = self.lp.add_variable(self.var_name(role, owner, hour), lb, ub, integer)
        return self.vmap.add(role, owner, hour, idx)

    def v(self, role: str, owner: Optional[str], hour: Optional[int] = None) -> int:
        return self.vmap.get(role, owner, hour)

    def cap_le(self, name: str, lhs, owner: str) -> None:
        """Add ``sum(lhs) <= capacity(owner)``."""
        const, idx = self.capacity[owner]
        terms = list(lhs)
        if idx is not None:
            terms.append((idx, -1.0))
        self.lp.add_constraint(name, terms, LE, const)


# declarations ---------------------------------------------------------------

def declare_thermal(ctx: ModelContext, cls: ThermalUnitClass, fixed_capacity: Optional[float] = None) -> None:
    """Online, start-up, shutdown and output columns for one class.

    With ``fixed_capacity`` the class has that capacity and no new-build column.
    """
    if fixed_capacity is None:
        idx = ctx.declare("new_cap", cls.id, None, 0.0, cls.max_new_mw)
        ctx.capacity[cls.id] = (cls.existing_capacity_mw, idx)
    else:
        ctx.capacity[cls.id] = (float(fixed_capacity), None)
    for t in ctx.hours():
        ctx.declare("online_cap", cls.id, t)
        ctx.declare("startup", cls.id, t)
        # cold start: nothing online before hour 0 can shut down at hour 0
        ctx.declare("shutdown", cls.id, t, 0.0, 0.0 if t == 0 else INF)
        ctx.declare("thermal_output", cls.id, t)
    if cls.is_chp:
        for t in ctx.hours():
            ctx.declare("chp_heat", cls.id, t)


def declare_renewables(ctx: ModelContext) -> None:
    for res in (ctx.problem.wind, ctx.problem.solar):
        idx = ctx.declare("new_cap", res.kind, None, 0.0, res.max_new_mw)
        ctx.capacity[res.kind] = (res.existing_capacity_mw, idx)
        role = f"{res.kind}_output"
        for t in ctx.hours():
            ctx.declare(role, res.kind, t)


def declare_storage(ctx: ModelContext) -> None:
    st = ctx.problem.storage
    if st is None:
        return
    ctx.declare("storage_cap", "storage", None, 0.0, st.energy_cap_limit_mwh)
    ctx.declare("p2h_cap", "storage", None, 0.0, st.p2h_cap_limit_mw)
    ctx.declare("h2p_cap", "storage", None, 0.0, st.h2p_cap_limit_mw)
    for t in ctx.hours():
        ctx.declare("p2h_power", "storage", t)
        ctx.declare("h2p_power", "storage", t)
        ctx.declare("h2_produced", "storage", t)
        ctx.declare("h2_consumed", "storage", t)
        ctx.declare("h2_in", "storage", t, 0.0, st.max_flow_in_mw)
        ctx.declare("h2_out", "storage", t, 0.0, st.max_flow_out_mw)
        ctx.declare("soc", "storage", t)


# constraint families -------------------------------------------------------

def add_commitment_linking(ctx: ModelContext, cls: ThermalUnitClass, t_range=None) -> None:
    """Online-capacity balance plus start/stop capacity bounds."""
    i = cls.id
    for t in ctx.hours(t_range):
        terms = [(ctx.v("online_cap", i, t), 1.0), (ctx.v("startup", i, t), -1.0),
                 (ctx.v("shutdown", i, t), 1.0)]
        if t > 0:
            terms.append((ctx.v("online_cap", i, t - 1), -1.0))
        ctx.lp.add_constraint(f"eq08.link.{i}.{hour_tag(t)}", terms, EQ, 0.0)
        ctx.cap_le(f"eq06.start_cap.{i}.{hour_tag(t)}", [(ctx.v("startup", i, t), 1.0)], i)
        ctx.cap_le(f"eq06.stop_cap.{i}.{hour_tag(t)}", [(ctx.v("shutdown", i, t), 1.0)], i)


def add_output_bounds(ctx: ModelContext, t_range=None) -> None:
    """Thermal output under online capacity under installed capacity; renewable availability."""
    p = ctx.problem
    for cls in p.thermal_classes:
        i = cls.id
        for t in ctx.hours(t_range):
            ctx.lp.add_constraint(
                f"eq14.output.{i}.{hour_tag(t)}",
                [(ctx.v("thermal_output", i, t), 1.0), (ctx.v("online_cap", i, t), -1.0)], LE, 0.0)
            ctx.cap_le(f"eq14.online.{i}.{hour_tag(t)}", [(ctx.v("online_cap", i, t), 1.0)], i)
    for tag, res, cf in (("eq15", p.wind, p.series.wind_cf), ("eq16", p.solar, p.series.solar_cf)):
        const, idx = ctx.capacity[res.kind]
        for t in ctx.hours(t_range):
            terms = [(ctx.v(f"{res.kind}_output", res.kind, t), 1.0)]
            if idx is not None:
                terms.append((idx, -float(cf[t])))
            ctx.lp.add_constraint(f"{tag}.{res.kind}_avail.{hour_tag(t)}", terms, LE, float(cf[t]) * const)


def add_ramping(ctx: ModelContext, cls: ThermalUnitClass, t_range=None) -> None:
    i = cls.id
    mu_hi, mu_lo = cls.max_output_ratio, cls.min_output_ratio
    ru, rd = cls.ramp_up_ratio, cls.ramp_down_ratio
    vs, vd = cls.startup_ramp_ratio, cls.shutdown_ramp_ratio
    T = ctx.T
    for t in ctx.hours(t_range):
        p_t = ctx.v("thermal_output", i, t)
        on_t = ctx.v("online_cap", i, t)
        s_t = ctx.v("startup", i, t)
        u_t = ctx.v("shutdown", i, t)
        cap = [(p_t, 1.0), (on_t, -mu_hi), (s_t, mu_hi - vs)]
        if t + 1 < T:
            cap.append((ctx.v("shutdown", i, t + 1), mu_hi - vd))
        ctx.lp.add_constraint(f"eq17.ramp_cap.{i}.{hour_tag(t)}", cap, LE, 0.0)

        up = [(p_t, 1.0), (on_t, -ru), (s_t, ru - vs), (u_t, mu_lo)]
        down = [(p_t, -1.0), (on_t, -rd), (s_t, rd + mu_lo), (u_t, -vd)]
        if t > 0:
            p_prev = ctx.v("thermal_output", i, t - 1)
            up.append((p_prev, -1.0))
            down.append((p_prev, 1.0))
        ctx.lp.add_constraint(f"eq18.ramp_up.{i}.{hour_tag(t)}", up, LE, 0.0)
        ctx.lp.add_constraint(f"eq19.ramp_down.{i}.{hour_tag(t)}", down, LE, 0.0)


def add_min_up_down(ctx: ModelContext, cls: ThermalUnitClass, t_range=None) -> None:
    """Minimum up/down windows on the aggregated start-up and shutdown capacity.

    Row ``t`` limits the shutdown (start-up) at ``t + 1`` by the online
    (offline) capacity at ``t`` net of start-ups (shutdowns) in the last
    ``min(t + 1, UT - 1)`` (``DT - 1``) hours.
    """
    i = cls.id
    T = ctx.T
    ut, dt = int(cls.min_up_hours), int(cls.min_down_hours)
    if ut > T or dt > T:
        raise FormulationError(f"class {i!r}: minimum up/down time exceeds the {T}-hour horizon")
    for t in ctx.hours(t_range):
        if t + 1 >= T:
            continue
        on_t = ctx.v("online_cap", i, t)
        up = [(ctx.v("shutdown", i, t + 1), 1.0), (on_t, -1.0)]
        for tau in range(max(0, t - ut + 2), t + 1):
            up.append((ctx.v("startup", i, tau), 1.0))
        ctx.lp.add_constraint(f"eq20_21.min_up.{i}.{hour_tag(t)}", up, LE, 0.0)

        down = [(ctx.v("startup", i, t + 1), 1.0), (on_t, 1.0)]
        for tau in range(max(0, t - dt + 2), t + 1):
            down.append((ctx.v("shutdown", i, tau), 1.0))
        ctx.cap_le(f"eq22_23.min_down.{i}.{hour_tag(t)}", down, i)


def add_chp_and_heat(ctx: ModelContext, t_range=None) -> None:
    """Tie CHP electric output to its heat output, and heat output to heat demand."""
    p = ctx.problem
    heat = p.series.heat_demand_mw
    chp = p.chp_class
    if chp is None:
        if heat.size and heat.max() > 0:
            raise FormulationError("heat demand present but no CHP class")
        return
    te = float(chp.thermoelectric_ratio)
    for t in ctx.hours(t_range):
        h = ctx.v("chp_heat", chp.id, t)
        ctx.lp.add_constraint(f"eq24.thermoelectric.{chp.id}.{hour_tag(t)}",
                              [(ctx.v("thermal_output", chp.id, t), 1.0), (h, -te)], EQ, 0.0)
        ctx.lp.add_constraint(f"eq25.heat_balance.{hour_tag(t)}", [(h, 1.0)], EQ, float(heat[t]))


def add_energy_balance(ctx: ModelContext, t_range=None) -> None:
    p = ctx.problem
    demand = p.series.demand_mw
    for t in ctx.hours(t_range):
        terms = [(ctx.v("thermal_output", c.id, t), 1.0) for c in p.thermal_classes]
        terms.append((ctx.v("wind_output", "wind", t), 1.0))
        terms.append((ctx.v("solar_output", "solar", t), 1.0))
        if p.storage is not None:
            terms.append((ctx.v("h2p_power", "storage", t), 1.0))
            terms.append((ctx.v("p2h_power", "storage", t), -1.0))
        ctx.lp.add_constraint(f"eq26.balance.{hour_tag(t)}", terms, EQ, float(demand[t]))


def add_hydrogen_system(ctx: ModelContext, t_range=None) -> None:
    """Converters, cavern stock balance with leakage, capacity and cyclic closure.

    The stock balance uses the current-hour stock for leakage::

        (1 + L) S_t = S_{t-1} + eta_in * H_in,t - H_out,t / eta_out

    with ``S_{-1} = initial_soc_frac * storage_cap``.
    """
    st = ctx.problem.storage
    if st is None:
        return
    v = ctx.v
    own = "storage"
    e_cap = v("storage_cap", own)
    for t in ctx.hours(t_range):
        tag = hour_tag(t)
        ctx.lp.add_constraint(f"eq27.p2h_limit.{tag}",
                              [(v("p2h_power", own, t), 1.0), (v("p2h_cap", own), -1.0)], LE, 0.0)
        ctx.lp.add_constraint(f"eq28.h2p_limit.{tag}",
                              [(v("h2_consumed", own, t), 1.0), (v("h2p_cap", own), -1.0)], LE, 0.0)
        ctx.lp.add_constraint(f"eq29.p2h_conv.{tag}",
                              [(v("h2_produced", own, t), 1.0), (v("p2h_power", own, t), -st.eta_p2h)], EQ, 0.0)
        ctx.lp.add_constraint(f"eq30.h2p_conv.{tag}",
                              [(v("h2p_power", own, t), 1.0), (v("h2_consumed", own, t), -st.eta_h2p)], EQ, 0.0)
        ctx.lp.add_constraint(f"cpl.h2_in.{tag}",
                              [(v("h2_in", own, t), 1.0), (v("h2_produced", own, t), -1.0)], EQ, 0.0)
        ctx.lp.add_constraint(f"cpl.h2_out.{tag}",
                              [(v("h2_out", own, t), 1.0), (v("h2_consumed", own, t), -1.0)], EQ, 0.0)
        bal = [(v("soc", own, t), 1.0 + st.leak_rate_per_hour),
               (v("h2_in", own, t), -st.eta_in),
               (v("h2_out", own, t), 1.0 / st.eta_out)]
        if t == 0:
            bal.append((e_cap, -st.initial_soc_frac))
        else:
            bal.append((v("soc", own, t - 1), -1.0))
        ctx.lp.add_constraint(f"eq31.soc_balance.{tag}", bal, EQ, 0.0)
        ctx.lp.add_constraint(f"eq32.soc_cap.{tag}", [(v("soc", own, t), 1.0), (e_cap, -1.0)], LE, 0.0)
    if t_range is None:
        last = ctx.T - 1
        ctx.lp.add_constraint("cyc.soc_closure",
                              [(v("soc", own, last), 1.0), (e_cap, -st.initial_soc_frac)], GE, 0.0)


def add_penetration_floor(ctx: ModelContext, rho: float) -> None:
    """Variable-renewable energy share of demand over the horizon is at least ``rho``."""
    if not 0 <= rho < 1:
        raise FormulationError(f"penetration target must lie in [0, 1), got {rho}")
    p = ctx.problem
    terms = [(ctx.v("wind_output", "wind", t), ctx.dt) for t in ctx.hours()]
    terms += [(ctx.v("solar_output", "solar", t), ctx.dt) for t in ctx.hours()]
    ctx.lp.add_constraint("pen.floor", terms, GE, rho * float(p.series.demand_mw.sum()) * ctx.dt)


def build_objective(ctx: ModelContext) -> None:
    """Investment, fixed O&M, fuel plus start-up, and storage cost terms.

    Annualised capacity costs are scaled by the share of the year the horizon
    covers. Converter O&M given per kW-year is charged per MWh of throughput
    at ``om * 1000 / 8760`` $/MWh.
    """
    p = ctx.problem
    lp = ctx.lp
    scale = p.cost_scale
    dt = ctx.dt
    for term in COST_TERMS:
        lp.cost_terms.setdefault(term, {})

    def capacity_costs(owner: str, annuity: float, om: float) -> None:
        const, idx = ctx.capacity[owner]
        if idx is not None:
            lp.add_cost(W_INVEST, idx, annuity * KW_PER_MW * scale)
            lp.add_cost(W_FIXED, idx, om * KW_PER_MW * scale)
        lp.add_cost_constant(W_FIXED, om * KW_PER_MW * scale * const)

    for cls in p.thermal_classes:
        capacity_costs(cls.id, p.thermal_annuity(cls), cls.om_cost)
        for t in ctx.hours():
            lp.add_cost(W_VARIABLE, ctx.v("thermal_output", cls.id, t), cls.fuel_cost * dt)
            lp.add_cost(W_VARIABLE, ctx.v("startup", cls.id, t), cls.startup_cost * dt)
    for res in (p.wind, p.solar):
        capacity_costs(res.kind, p.renewable_annuity(res), res.om_cost)

    st = p.storage
    if st is not None:
        own = "storage"
        lp.add_cost(W_STORAGE, ctx.v("storage_cap", own), st.energy_capital * KW_PER_MW * scale)
        lp.add_cost(W_STORAGE, ctx.v("p2h_cap", own), st.p2h_capital * KW_PER_MW * scale)
        lp.add_cost(W_STORAGE, ctx.v("h2p_cap", own), st.h2p_capital * KW_PER_MW * scale)
        p2h_rate = per_mwh_om(st.p2h_om)
        h2p_rate = per_mwh_om(st.h2p_om)
        for t in ctx.hours():
            lp.add_cost(W_STORAGE, ctx.v("p2h_power", own, t), p2h_rate * dt)
            lp.add_cost(W_STORAGE, ctx.v("h2_consumed", own, t), h2p_rate * dt)


def per_mwh_om(om_per_kw_year: float) -> float:
    return om_per_kw_year * KW_PER_MW / HOURS_PER_YEAR
