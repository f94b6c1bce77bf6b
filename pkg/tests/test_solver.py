import itertools
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from cavernplan.formulation import EQ, GE, INF, LE, LinearProgram, build_fast_model
from cavernplan.solver import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    ExternalSolverError,
    MPSError,
    SolveResult,
    SolverConfig,
    export_mps,
    format_number,
    parse_mps,
    read_solution,
    solve_external,
    solve_lp,
    solve_mip,
)

from conftest import day_problem
from oracles import brute_force_uc

DATA = Path(__file__).parent / "data"
HIGHS_CMD = f"{sys.executable} -m cavernplan.solver.highs_cmd {{mps}} {{sol}}"


def make_lp(c, rows, bounds=None, integer=(), name="t"):
    """rows: (coefs, sense, rhs); bounds: per-variable (lb, ub)."""
    lp = LinearProgram(name)
    for j in range(len(c)):
        lb, ub = bounds[j] if bounds else (0.0, INF)
        lp.add_variable(f"x{j}", lb, ub, integer=j in integer)
    for j, cj in enumerate(c):
        lp.add_cost("cost", j, cj)
    for r, (coefs, sense, rhs) in enumerate(rows):
        lp.add_constraint(f"r{r}", enumerate(coefs), sense, rhs)
    return lp


# textbook LP ----------------------------------------------------------------

def best_vertex(A, b):
    """Enumerate every intersection of two tight constraints among A x <= b."""
    best = -math.inf
    for i, k in itertools.combinations(range(len(A)), 2):
        M = np.array([A[i], A[k]], float)
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        v = np.linalg.solve(M, [b[i], b[k]])
        if np.all(np.asarray(A) @ v <= np.asarray(b) + 1e-9):
            best = max(best, 3 * v[0] + 2 * v[1])
    return best


def textbook_lp():
    """max 3x + 2y s.t. x <= 4, y <= 3, x + y <= 5, written as a minimisation."""
    lp = LinearProgram("textbook")
    x = lp.add_variable("x")
    y = lp.add_variable("y")
    lp.add_cost("profit", x, -3.0)
    lp.add_cost("profit", y, -2.0)
    lp.add_constraint("x_cap", [(x, 1.0)], LE, 4.0)
    lp.add_constraint("y_cap", [(y, 1.0)], LE, 3.0)
    lp.add_constraint("total", [(x, 1.0), (y, 1.0)], LE, 5.0)
    return lp


def test_textbook_lp_matches_vertex_enumeration():
    A = [[1, 0], [0, 1], [1, 1], [-1, 0], [0, -1]]
    b = [4, 3, 5, 0, 0]
    assert best_vertex(A, b) == pytest.approx(14.0)
    res = solve_lp(textbook_lp())
    assert res.status == OPTIMAL
    assert -res.objective_value == pytest.approx(best_vertex(A, b), abs=1e-9)
    assert res.primal_values == pytest.approx([4.0, 1.0], abs=1e-9)


def test_zero_objective_over_a_box():
    lp = make_lp([0.0, 0.0], [([1, 1], LE, 3)], bounds=[(1.0, 2.0), (-1.0, 0.5)])
    assert solve_lp(lp).objective_value == 0.0


def test_infeasible_and_unbounded():
    bad = make_lp([1.0], [([1], GE, 2), ([1], LE, 1)])
    assert solve_lp(bad).status == INFEASIBLE
    loose = make_lp([-1.0, 0.0], [([1, -1], LE, 1)])
    res = solve_lp(loose)
    assert res.status == UNBOUNDED and res.primal_values is None and math.isnan(res.objective_value)


def test_crossed_bounds_are_rejected_or_infeasible():
    with pytest.raises(ValueError):
        make_lp([1.0], [([1], LE, 5)], bounds=[(3.0, 2.0)])
    # branching can cross bounds at the array level
    lp = make_lp([1.0], [([1], LE, 5)])
    lp.lb[0], lp.ub[0] = 3.0, 2.0
    assert solve_lp(lp).status == INFEASIBLE


def test_beale_cycling_example():
    c = [-0.75, 150.0, -0.02, 6.0]
    rows = [([0.25, -60, -0.04, 9], LE, 0), ([0.5, -90, -0.02, 3], LE, 0), ([0, 0, 1, 0], LE, 1)]
    res = solve_lp(make_lp(c, rows))
    assert res.status == OPTIMAL
    assert res.objective_value == pytest.approx(-0.05, abs=1e-12)


def test_free_and_negative_bounds():
    lp = make_lp([1.0, 1.0], [([1, 1], GE, -3), ([1, -1], EQ, 1)], bounds=[(-INF, INF), (-5.0, 5.0)])
    res = solve_lp(lp)
    assert res.objective_value == pytest.approx(-3.0)
    assert res.primal_values == pytest.approx([-1.0, -2.0])


def test_iteration_limit_reported():
    lp, _ = build_fast_model(day_problem())
    assert solve_lp(lp, SolverConfig(max_iterations=3)).status == ITERATION_LIMIT


def test_model_solve_is_bitwise_deterministic():
    lp, _ = build_fast_model(day_problem())
    a, b = solve_lp(lp), solve_lp(lp)
    assert a.objective_value == b.objective_value
    assert np.array_equal(a.primal_values, b.primal_values)
    assert a.iterations == b.iterations


@pytest.mark.parametrize("field", ["feasibility_tol", "optimality_tol", "shift_tol", "perturbation"])
def test_config_rejects_non_positive(field):
    with pytest.raises(ValueError):
        SolverConfig(**{field: 0.0})
    with pytest.raises(ValueError):
        SolverConfig(**{field: math.inf})


def test_result_checks_status_consistency():
    with pytest.raises(ValueError):
        SolveResult("done", 0.0, None, 0, 0.0)
    with pytest.raises(ValueError):
        SolveResult(OPTIMAL, 0.0, None, 0, 0.0)


# against scipy, and through the dual ---------------------------------------------

@st.composite
def random_lp(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    coef = st.floats(-5, 5, allow_nan=False).map(lambda v: round(v, 3))
    A = np.array(draw(st.lists(st.lists(coef, min_size=n, max_size=n), min_size=m, max_size=m)))
    b = np.array(draw(st.lists(st.floats(-10, 10).map(lambda v: round(v, 3)), min_size=m, max_size=m)))
    c = np.array(draw(st.lists(coef, min_size=n, max_size=n)))
    senses = draw(st.lists(st.sampled_from([LE, GE, EQ]), min_size=m, max_size=m))
    ub = np.array(draw(st.lists(st.sampled_from([4.0, 10.0, INF]), min_size=n, max_size=n)))
    return c, A, b, senses, ub


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(random_lp())
def test_matches_scipy_highs(data):
    c, A, b, senses, ub = data
    lp = make_lp(c, [(A[r], senses[r], b[r]) for r in range(len(b))], bounds=[(0.0, u) for u in ub])
    ours = solve_lp(lp)
    le = [r for r, s in enumerate(senses) if s == LE]
    ge = [r for r, s in enumerate(senses) if s == GE]
    eq = [r for r, s in enumerate(senses) if s == EQ]
    A_ub = np.vstack([A[le], -A[ge]]) if le or ge else None
    b_ub = np.concatenate([b[le], -b[ge]]) if le or ge else None
    ref = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A[eq] if eq else None, b_eq=b[eq] if eq else None,
                  bounds=[(0, None if u == INF else u) for u in ub], method="highs")
    expected = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    assert ours.status == expected
    if expected == OPTIMAL:
        assert ours.objective_value == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
        assert lp.max_violation(ours.primal_values) <= 1e-7


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_primal_and_dual_optima_coincide(seed):
    # min c x, A x >= b, x >= 0   versus   max b y, A' y <= c, y >= 0
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 6, 2)
    A = np.round(rng.uniform(0, 4, (m, n)), 2)
    b = np.round(rng.uniform(0, 5, m), 2)
    c = np.round(rng.uniform(0.5, 5, n), 2)
    primal = solve_lp(make_lp(c, [(A[r], GE, b[r]) for r in range(m)]))
    dual = solve_lp(make_lp(-b, [(A[:, j], LE, c[j]) for j in range(n)]))
    if primal.status == INFEASIBLE:
        assert dual.status == UNBOUNDED
        return
    assert primal.status == dual.status == OPTIMAL
    assert -dual.objective_value <= primal.objective_value + 1e-9
    assert primal.objective_value == pytest.approx(-dual.objective_value, rel=1e-9, abs=1e-9)


# branch and bound ----------------------------------------------------------------

def test_integral_relaxation_needs_one_node():
    # assignment polytope: every vertex is integral
    cost = np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
    rows = []
    for i in range(3):
        rows.append(([1.0 if k // 3 == i else 0.0 for k in range(9)], EQ, 1))
        rows.append(([1.0 if k % 3 == i else 0.0 for k in range(9)], EQ, 1))
    lp = make_lp(cost.ravel(), rows, bounds=[(0.0, 1.0)] * 9, integer=range(9))
    res = solve_mip(lp)
    assert res.status == OPTIMAL and res.nodes == 1
    assert res.objective_value == pytest.approx(min(
        sum(cost[i, p[i]] for i in range(3)) for p in itertools.permutations(range(3))))


@pytest.mark.parametrize("seed", range(6))
def test_knapsack_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = 10
    w = rng.integers(5, 30, n).astype(float)
    v = rng.integers(5, 40, n).astype(float)
    cap = float(w.sum() // 2)
    lp = make_lp(-v, [(w, LE, cap)], bounds=[(0.0, 1.0)] * n, integer=range(n))
    res = solve_mip(lp, SolverConfig(bnb_gap_tol=1e-9))
    best = max(v @ np.array(bits) for bits in itertools.product((0, 1), repeat=n) if w @ np.array(bits) <= cap)
    assert -res.objective_value == pytest.approx(best)
    hist = res.incumbent_history
    assert all(later <= earlier for earlier, later in zip(hist, hist[1:]))
    assert res.best_bound <= res.objective_value + 1e-9


def test_infeasible_mip():
    lp = make_lp([1.0, 1.0], [([2, 2], EQ, 1)], bounds=[(0.0, 1.0)] * 2, integer=(0, 1))
    assert solve_mip(lp).status == INFEASIBLE


def test_node_limit_returns_incumbent_information():
    rng = np.random.default_rng(3)
    n = 18
    w = rng.integers(5, 30, n).astype(float)
    lp = make_lp(-rng.integers(5, 40, n).astype(float), [(w, LE, float(w.sum() // 2))],
                 bounds=[(0.0, 1.0)] * n, integer=range(n))
    res = solve_mip(lp, SolverConfig(bnb_node_limit=3, bnb_gap_tol=1e-9))
    assert res.status == ITERATION_LIMIT and res.nodes == 3


def test_mip_rejects_general_integers():
    lp = make_lp([1.0], [([1], LE, 5)], bounds=[(0.0, 5.0)], integer=(0,))
    with pytest.raises(ValueError):
        solve_mip(lp)


def test_unit_commitment_oracle_matches_brute_force():
    from cavernplan.engine import random_uc_instance
    from cavernplan.formulation import build_oracle_model
    inst = random_uc_instance(4, 2, 4, 2)
    res = solve_mip(build_oracle_model(inst.problem, inst.units)[0], SolverConfig(bnb_gap_tol=1e-9))
    assert res.objective_value == pytest.approx(brute_force_uc(inst.problem, inst.units), rel=1e-9)


# MPS ------------------------------------------------------------------------------

def example_lp():
    lp = LinearProgram("example")
    lp.add_variable("x", 0.0, 4.0)
    lp.add_variable("y", -INF, INF)
    lp.add_variable("z", -2.0, INF)
    lp.add_variable("b", 0.0, 1.0, integer=True)
    lp.add_variable("k", 3.5, 3.5)
    lp.add_cost("c", 0, 1.5)
    lp.add_cost("c", 1, -1.0)
    lp.add_cost("c", 3, 10.0)
    lp.add_cost_constant("c", 7.25)
    lp.add_constraint("cap", [(0, 1.0), (1, 1.0), (3, -4.0)], LE, 6.0)
    lp.add_constraint("floor", [(1, 1.0), (2, 2.0)], GE, -1.0)
    lp.add_constraint("tie", [(0, 1.0), (2, -1.0), (4, 1.0)], EQ, 0.1)
    return lp


@pytest.mark.parametrize("build, golden", [(textbook_lp, "textbook.mps"), (example_lp, "example.mps")])
def test_golden_file(build, golden):
    assert export_mps(build()) == (DATA / golden).read_text()


def test_empty_model_skeleton():
    text = export_mps(LinearProgram("empty"))
    assert text.splitlines() == ["NAME          empty", "ROWS", " N  OBJ", "COLUMNS", "RHS", "BOUNDS", "ENDATA"]
    back = parse_mps(text)
    assert back.num_vars == 0 and back.num_constraints == 0


def test_example_round_trip_and_solve():
    lp = example_lp()
    back = parse_mps(export_mps(lp))
    assert back.structure() == lp.structure()
    assert solve_lp(back).objective_value == solve_lp(lp).objective_value


def random_model(rng, k):
    n, m = int(rng.integers(1, 8)), int(rng.integers(0, 6))
    lp = LinearProgram(f"rand{k}")
    for j in range(n):
        lo = float(rng.choice([0.0, -INF, rng.normal()]))
        hi = float(rng.choice([INF, lo + abs(rng.normal()) * 10 if lo > -INF else rng.normal()]))
        integer = bool(rng.random() < 0.2)
        if integer:
            lo, hi = 0.0, 1.0
        lp.add_variable(f"v_{j}.with.long.name.{k}", lo, hi, integer=integer)
        lp.add_cost("cost", j, float(rng.normal()) / 3.0)
    for r in range(m):
        idx = rng.choice(n, int(rng.integers(1, n + 1)), replace=False)
        lp.add_constraint(f"row.{r}", [(int(j), float(rng.normal()) * 1e3 ** rng.integers(-1, 2)) for j in idx],
                          str(rng.choice([LE, GE, EQ])), float(rng.normal()) / 7.0)
    if rng.random() < 0.5:
        lp.add_cost_constant("cost", float(rng.normal()))
    return lp


def test_fifty_random_models_round_trip():
    rng = np.random.default_rng(2024)
    for k in range(50):
        lp = random_model(rng, k)
        back = parse_mps(export_mps(lp))
        assert back.structure() == lp.structure()
        a, b = solve_lp(lp), solve_lp(back)
        assert a.status == b.status
        if a.status == OPTIMAL:
            assert abs(a.objective_value - b.objective_value) <= 1e-9 * max(1.0, abs(a.objective_value))


def test_full_model_round_trip():
    lp, _ = build_fast_model(day_problem())
    assert parse_mps(export_mps(lp)).structure() == lp.structure()


@pytest.mark.parametrize("value, text", [(1.0, "1"), (-0.0, "0"), (0.1, "0.1"), (1e-20, "1e-20"), (-2.5, "-2.5")])
def test_number_format(value, text):
    assert format_number(value) == text
    assert float(text) == value


FOREIGN = """\
* written by hand in the fixed-field style
NAME          FOREIGN
OBJSENSE
    MIN
ROWS
 N  COST
 L  LIM1
 G  LIM2
 E  MYEQN
COLUMNS
    MARKER                 'MARKER'                 'INTORG'
    X1        COST         1.0   LIM1         1.0
    X1        LIM2         1.0
    MARKER                 'MARKER'                 'INTEND'
    X2        COST         2.0   LIM1         1.0
    X2        MYEQN       -1.0
    X3        COST        -1.0   MYEQN        1.0
RHS
    RHS       COST        -3.0
    RHS       LIM1         4.0   LIM2         1.0
    RHS       MYEQN        7.0
RANGES
    RNG       LIM1         2.5
BOUNDS
 UP BND       X1           4.0
 MI BND       X2
 UP BND       X2           1.0
 BV BND       X3
ENDATA
"""


def test_parser_reads_foreign_features():
    lp = parse_mps(FOREIGN)
    assert lp.name == "FOREIGN"
    assert lp.var_names == ["X1", "X2", "X3"]
    assert lp.integer == [True, False, True]
    assert (lp.lb, lp.ub) == ([0.0, -INF, 0.0], [4.0, 1.0, 1.0])
    assert lp.objective_offset == 3.0
    lim = lp.constraint("LIM1")
    rng = lp.constraint("LIM1.range")
    assert (lim.sense, lim.rhs, rng.sense, rng.rhs) == (GE, 1.5, LE, 4.0)
    assert lp.constraint("MYEQN").coefs == (-1.0, 1.0)


@pytest.mark.parametrize("text, message", [
    ("NAME x\nFOO\nENDATA\n", "unknown section"),
    ("NAME x\nROWS\n N  OBJ\n Q  R\nENDATA\n", "malformed ROWS"),
    ("NAME x\nROWS\n N  OBJ\nCOLUMNS\n    a  OBJ  one\nENDATA\n", "bad number"),
    ("NAME x\nROWS\n N  OBJ\nCOLUMNS\n    a  OBJ  1\n    b  OBJ  1\n    a  OBJ  1\nENDATA\n", "not contiguous"),
    ("NAME x\nROWS\n N  OBJ\nCOLUMNS\n    a  OBJ  1\nBOUNDS\n UP BND  q  1\nENDATA\n", "unknown column"),
    ("NAME x\nROWS\n N  OBJ\nCOLUMNS\n    a  R  1\nENDATA\n", "unknown row"),
    ("NAME x\nROWS\n N  OBJ\nCOLUMNS\n    a  OBJ  1\nRHS\n    RHS  R  1\nENDATA\n", "unknown rows"),
    ("NAME x\nOBJSENSE\n    MAX\nENDATA\n", "minimisation"),
    ("NAME x\n  stray\n", "outside a section"),
])
def test_parser_errors(text, message):
    with pytest.raises(MPSError, match=message):
        parse_mps(text)


def test_writer_rejects_whitespace_names():
    lp = LinearProgram("m")
    lp.add_variable("bad name")
    with pytest.raises(MPSError):
        export_mps(lp)


# external solver hand-off ------------------------------------------------------------

def test_external_highs_matches_simplex():
    lp, _ = build_fast_model(day_problem())
    ours = solve_lp(lp)
    theirs = solve_external(lp, HIGHS_CMD)
    assert theirs.status == OPTIMAL
    assert theirs.objective_value == pytest.approx(ours.objective_value, rel=1e-7)
    assert lp.max_violation(theirs.primal_values) <= 1e-6


def test_external_reports_infeasible():
    bad = make_lp([1.0], [([1], GE, 2), ([1], LE, 1)])
    assert solve_external(bad, HIGHS_CMD).status == INFEASIBLE


def test_external_solver_errors(monkeypatch):
    lp = make_lp([1.0], [([1], GE, 2)])
    monkeypatch.delenv("CAVERNPLAN_SOLVER_CMD", raising=False)
    with pytest.raises(ExternalSolverError, match="no external solver"):
        solve_external(lp)
    with pytest.raises(ExternalSolverError, match="placeholders"):
        solve_external(lp, "highs {mps}")
    with pytest.raises(ExternalSolverError, match="exited"):
        solve_external(lp, f"{sys.executable} -c 'raise SystemExit(4)' {{mps}} {{sol}}")
    with pytest.raises(ExternalSolverError, match="failed to run"):
        solve_external(lp, "/nonexistent/solver {mps} {sol}")


@pytest.mark.parametrize("text, status, values", [
    ("# status optimal\nx 1.5\ny -2\n", OPTIMAL, {"x": 1.5, "y": -2.0}),
    ("# status infeasible\n", INFEASIBLE, {}),
    ("# a comment\nx 3\n", OPTIMAL, {"x": 3.0}),
    ("", INFEASIBLE, {}),
])
def test_read_solution(text, status, values):
    assert read_solution(text) == (status, values)


@pytest.mark.parametrize("text", ["x\n", "x one\n", "# status solved\n"])
def test_read_solution_errors(text):
    with pytest.raises(ExternalSolverError):
        read_solution(text)
