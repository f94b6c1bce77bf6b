import dataclasses
import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from cavernplan.domain import storage_presets
from cavernplan.engine import (
    ComparisonReport,
    PlanError,
    PlanSolution,
    RelaxationError,
    ScenarioSpec,
    audit_conservation,
    compute_curtailment,
    compute_emissions,
    plan_files,
    random_uc_instance,
    relative_delta,
    run_comparison,
    run_plan,
    scenario_specs,
    verify_fast_uc,
    verify_instance,
)
from cavernplan.engine.compare import compute_deltas
from cavernplan.engine.verify import VerificationTable, relative_gap
from cavernplan.formulation import build_fast_model, fixed_capacity_problem
from cavernplan.solver import INFEASIBLE, SolverConfig, solve_lp

from conftest import day_problem, single_class_problem


def bare_solution(dispatch, new_capacity=None):
    return PlanSolution(new_capacity=new_capacity or {}, dispatch=dispatch, cost_breakdown={},
                        emissions_tco2=0.0, wind_curtailed_mwh=0.0, solar_curtailed_mwh=0.0,
                        soc_series=np.zeros(2), solve_meta={})


def zero_problem(T=6):
    p = single_class_problem(np.zeros(T), existing_capacity_mw=0.0)
    return dataclasses.replace(p, wind=dataclasses.replace(p.wind, existing_capacity_mw=0.0),
                               solar=dataclasses.replace(p.solar, existing_capacity_mw=0.0))


# run_plan -------------------------------------------------------------------

def test_zero_demand_plan_costs_nothing():
    sol = run_plan(zero_problem())
    assert sol.total_cost == 0.0
    assert all(v == 0.0 for v in sol.new_capacity.values())
    assert sol.emissions_tco2 == 0.0 and sol.curtailed_mwh == 0.0


def test_unservable_demand_is_reported_with_hours():
    p = fixed_capacity_problem(single_class_problem(np.array([40.0, 500.0, 40.0]), unit_size_mw=100.0), 1)
    with pytest.raises(PlanError) as info:
        run_plan(p)
    assert info.value.status == INFEASIBLE
    assert [h["hour"] for h in info.value.diagnostics["hours"]] == [1]
    assert info.value.diagnostics["hours"][0]["shortfall_mw"] > 0


def test_invalid_problem_is_rejected_before_solving():
    with pytest.raises(ValueError, match="penetration"):
        run_plan(dataclasses.replace(day_problem(), penetration_target=1.2))


def test_plan_invariants_on_day_instance():
    p = day_problem()
    sol = run_plan(p)
    assert sum(sol.cost_breakdown.values()) == pytest.approx(sol.objective_value, rel=1e-6)
    assert sol.wind_curtailed_mwh >= 0 and sol.solar_curtailed_mwh >= 0
    cap = sol.new_capacity["storage_energy_mwh"]
    assert np.all(sol.soc_series >= 0) and np.all(sol.soc_series <= cap + 1e-6)
    assert sol.dispatch["soc.storage"] is not None


def test_plan_reads_series_straight_from_primal():
    p = day_problem()
    lp, vmap = build_fast_model(p)
    x = solve_lp(lp).primal_values
    sol = run_plan(p)
    assert np.array_equal(sol.dispatch["thermal_output.coal"], vmap.values(x, "thermal_output", "coal"))


def test_conservation_audit_on_solved_day():
    lp, vmap = build_fast_model(day_problem())
    x = solve_lp(lp).primal_values
    audit = audit_conservation(lp, vmap, x)
    assert audit["energy_balance"] <= 1e-6 and audit["stock_balance"] <= 1e-6
    x[vmap.get("thermal_output", "coal", 5)] += 3.0
    assert audit_conservation(lp, vmap, x)["energy_balance"] > 1e-3


def test_callable_solver_and_unknown_name():
    p = day_problem()
    seen = []

    def spy(lp):
        seen.append(lp.num_vars)
        return solve_lp(lp)

    run_plan(p, solver=spy)
    assert len(seen) == 1
    with pytest.raises(ValueError, match="unknown solver"):
        run_plan(p, solver="cplex")


# curtailment and emissions ----------------------------------------------------------

def curtailment_problem():
    p = single_class_problem(np.zeros(2), wind_cf=np.array([0.5, 1.0]))
    return dataclasses.replace(p, wind=dataclasses.replace(p.wind, existing_capacity_mw=10.0),
                               solar=dataclasses.replace(p.solar, existing_capacity_mw=0.0))


@pytest.mark.parametrize("delivered, expected", [([5.0, 8.0], 2.0), ([5.0, 10.0], 0.0), ([0.0, 0.0], 15.0)])
def test_curtailment_arithmetic(delivered, expected):
    sol = bare_solution({"wind_output.wind": np.array(delivered), "solar_output.solar": np.zeros(2)})
    wind, solar = compute_curtailment(sol, curtailment_problem())
    assert (wind, solar) == (pytest.approx(expected), 0.0)


def test_curtailment_rejects_output_above_availability():
    sol = bare_solution({"wind_output.wind": np.array([6.0, 10.0])})
    with pytest.raises(ValueError):
        compute_curtailment(sol, curtailment_problem())


def test_emissions_arithmetic():
    p = single_class_problem(np.zeros(2), emission_factor=0.9)
    assert compute_emissions(bare_solution({"thermal_output.coal": np.array([60.0, 40.0])}), p) == pytest.approx(90.0)
    assert compute_emissions(bare_solution({"thermal_output.coal": np.zeros(2)}), p) == 0.0


def test_cavern_weakly_reduces_curtailment_when_congested():
    # fixed fleet, windy first half and calm second half
    T = 12
    wind_cf = np.r_[np.full(6, 0.9), np.full(6, 0.05)]
    base = single_class_problem(np.full(T, 60.0), wind_cf=wind_cf)
    base = fixed_capacity_problem(dataclasses.replace(
        base, thermal_classes=[dataclasses.replace(base.thermal_classes[0], unit_size_mw=100.0)]), 1)
    base = dataclasses.replace(base, wind=dataclasses.replace(base.wind, existing_capacity_mw=150.0))
    without = run_plan(base)
    with_cavern = run_plan(dataclasses.replace(base, storage=storage_presets(100.0)["SCHSS"]))
    assert without.curtailed_mwh > 0
    assert with_cavern.curtailed_mwh <= without.curtailed_mwh + 1e-6


# comparison ---------------------------------------------------------------------

@pytest.mark.parametrize("other, ref, expected", [(100.0, 78.0, 0.22), (5.0, 5.0, 0.0), (0.0, 0.0, 0.0),
                                                  (0.0, 1.0, None)])
def test_relative_delta(other, ref, expected):
    got = relative_delta(other, ref)
    assert got == (pytest.approx(expected) if expected is not None else None)


@pytest.mark.parametrize("levels", [(), (0.5, 0.2), (0.2, 0.2), (0.2, 1.0), (-0.1,)])
def test_scenario_spec_rejects_bad_levels(levels):
    with pytest.raises(ValueError):
        ScenarioSpec("SCHSS", None, levels, day_problem())


def test_scenario_spec_rejects_unknown_kind():
    with pytest.raises(ValueError):
        ScenarioSpec("PUMPED", None, (0.2,), day_problem())


def test_identical_storage_gives_zero_deltas():
    template = dataclasses.replace(day_problem(), storage=None)
    st = storage_presets(100.0)["SCHSS"]
    specs = [ScenarioSpec(kind, st, (0.3,), template) for kind in ("BAU", "SCHSS")]
    report = run_comparison(specs)
    assert [d["scenario"] for d in report.deltas] == ["BAU", "SCHSS"]
    for d in report.deltas:
        assert d["cost_pct"] == d["emissions_pct"] == d["curtailment_pct"] == 0.0


@pytest.fixture(scope="module")
def day_report():
    specs = scenario_specs(day_problem(), storage_presets(100.0), (0.2, 0.5))
    return specs, run_comparison(specs)


def test_comparison_rows_are_ordered(day_report):
    _, report = day_report
    assert [(r["scenario"], r["penetration"]) for r in report.rows] == [
        (k, rho) for k in ("BAU", "HSS", "SCHSS") for rho in (0.2, 0.5)]
    assert report.row("HSS", 0.5)["summary"]["total_cost"] > 0
    with pytest.raises(KeyError):
        report.row("HSS", 0.9)


def test_comparison_json_round_trip(day_report):
    _, report = day_report
    text = report.to_json()
    back = ComparisonReport.from_json(text)
    assert back == report
    assert back.to_json() == text
    assert "wall_time" not in text


def test_deltas_use_other_scenario_as_denominator(day_report):
    _, report = day_report
    for d in report.deltas:
        other = report.row(d["scenario"], d["penetration"])["summary"]["total_cost"]
        ref = report.row("SCHSS", d["penetration"])["summary"]["total_cost"]
        assert d["cost_pct"] == pytest.approx(100 * (other - ref) / other)
    assert compute_deltas(report.rows) == report.deltas


def test_process_pool_matches_serial(day_report):
    specs, report = day_report
    assert run_comparison(specs, workers=2) == report


def test_comparison_requires_shared_template():
    a = ScenarioSpec("BAU", None, (0.2,), day_problem())
    b = ScenarioSpec("SCHSS", None, (0.2,), day_problem(seed=4))
    with pytest.raises(ValueError, match="template"):
        run_comparison([a, b])
    with pytest.raises(ValueError, match="distinct"):
        run_comparison([a, a])


# reports ------------------------------------------------------------------------

def test_plan_report_validates_against_schema():
    schema = json.loads(resources.files("cavernplan.schemas").joinpath("plan_report.schema.json").read_text())
    p = day_problem()
    files = plan_files(run_plan(p), p, "schss")
    jsonschema.validate(json.loads(files["plan.json"]), schema)
    assert sorted(files) == ["cost_distribution.csv", "curtailment.csv", "emissions.csv", "new_capacity.csv",
                             "plan.json", "soc.csv"]
    assert files["soc.csv"].count("\n") == p.horizon + 1
    assert files["cost_distribution.csv"].splitlines()[0] == "term,cost"


# fast UC verification ---------------------------------------------------------------

@pytest.mark.parametrize("fast, oracle, expected", [(1.0, 1.0, 0.0), (99.0, 100.0, 0.01), (0.0, 0.0, 0.0)])
def test_relative_gap(fast, oracle, expected):
    assert relative_gap(fast, oracle) == pytest.approx(expected)


def test_integral_instance_has_zero_gap():
    # one unit that must run every hour at a flat load: no fractional commitment helps
    p = single_class_problem(np.full(4, 50.0), unit_size_mw=100.0)
    from cavernplan.engine import UCInstance
    row = verify_instance(UCInstance("flat", fixed_capacity_problem(p, 1), 1))
    assert row.status == "optimal"
    assert row.gap == pytest.approx(0.0, abs=1e-9)


def test_gap_is_invariant_under_cost_scaling():
    inst = random_uc_instance(7, 2, 5, 1)
    cls = inst.problem.thermal_classes
    scaled = dataclasses.replace(inst, problem=dataclasses.replace(inst.problem, thermal_classes=[
        dataclasses.replace(c, fuel_cost=3 * c.fuel_cost, startup_cost=3 * c.startup_cost,
                            capital_cost=3 * c.capital_cost) for c in cls],
        wind=dataclasses.replace(inst.problem.wind, om_cost=3 * inst.problem.wind.om_cost,
                                 capital_cost=3 * inst.problem.wind.capital_cost),
        solar=dataclasses.replace(inst.problem.solar, om_cost=3 * inst.problem.solar.om_cost,
                                  capital_cost=3 * inst.problem.solar.capital_cost)))
    a, b = verify_instance(inst), verify_instance(scaled)
    assert b.oracle_objective == pytest.approx(3 * a.oracle_objective, rel=1e-9)
    assert b.gap == pytest.approx(a.gap, rel=1e-6, abs=1e-12)


def test_relaxation_violation_raises(monkeypatch):
    import cavernplan.engine.verify as verify
    inst = random_uc_instance(2, 1, 4, 1)
    real = verify.solve_lp

    def inflated(lp, cfg=None):
        res = real(lp, cfg)
        res.objective_value = 1e12
        return res

    monkeypatch.setattr(verify, "solve_lp", inflated)
    with pytest.raises(RelaxationError):
        verify_instance(inst)


def test_verification_table_output_excludes_timings():
    table = verify_fast_uc([random_uc_instance(s, 1, 4, 1) for s in range(2)], SolverConfig(bnb_gap_tol=1e-9))
    assert isinstance(table, VerificationTable)
    data = json.loads(table.to_json())
    assert "fast_time" not in data["rows"][0] and "fast_always_faster" not in data["summary"]
    assert "fast_time" in json.loads(table.to_json(timings=True))["rows"][0]
    assert table.to_csv().splitlines()[0].split(",")[:3] == ["instance", "classes", "units"]
    assert data["summary"]["median_gap"] == table.median_gap >= 0
