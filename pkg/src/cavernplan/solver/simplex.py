"""Bounded-variable revised primal simplex.

Rows are written as ``A x - r = 0`` where each logical ``r_i`` carries the
row's bounds (``<=`` gives ``(-inf, b]``, ``>=`` gives ``[b, inf)``, ``=``
gives ``[b, b]``). Nonbasic variables always sit at a bound (or at zero when
free). Phase 1 minimises the total bound violation of the basic variables,
so any basis, including a parent basis in branch-and-bound, is a valid start.

The basis is kept as a sparse LU factorisation plus a short product-form eta
file that is folded back in every ``refactor_interval`` pivots.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"
STATUSES = (OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT)


@dataclass(frozen=True)
class SolverConfig:
    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-7
    max_iterations: int = 500_000
    bnb_gap_tol: float = 1e-6
    bnb_node_limit: int = 20_000
    refactor_interval: int = 64
    pivot_tol: float = 1e-9
    degenerate_limit: int = 50
    perturbation: float = 1e-6
    shift_tol: float = 1e-6
    integrality_tol: float = 1e-6

    def __post_init__(self):
        for name in ("feasibility_tol", "optimality_tol", "bnb_gap_tol", "pivot_tol", "integrality_tol",
                     "perturbation", "shift_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value}")
        for name in ("max_iterations", "bnb_node_limit", "refactor_interval", "degenerate_limit"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass
class SolveResult:
    status: str
    objective_value: float
    primal_values: Optional[np.ndarray]
    iterations: int
    wall_time: float
    nodes: int = 0
    best_bound: float = math.nan
    incumbent_values: Optional[np.ndarray] = None
    incumbent_history: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.primal_values is not None) != (self.status == OPTIMAL):
            raise ValueError("primal_values must be present exactly when status is optimal")

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def summary(self) -> dict:
        return {
            "status": self.status,
            "objective_value": self.objective_value,
            "iterations": self.iterations,
            "nodes": self.nodes,
            "wall_time": self.wall_time,
        }


@dataclass
class Basis:
    """Warm-start information: basic column per row and nonbasic-at-upper flags."""

    head: np.ndarray
    at_upper: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))


def row_bounds(senses, rhs) -> Tuple[np.ndarray, np.ndarray]:
    m = len(rhs)
    lo = np.full(m, -np.inf)
    hi = np.full(m, np.inf)
    for i, (s, b) in enumerate(zip(senses, rhs)):
        if s in ("<=", "="):
            hi[i] = b
        if s in (">=", "="):
            lo[i] = b
    return lo, hi


class _Factor:
    """LU of the basis matrix with an eta file for rank-one column swaps."""

    def __init__(self, B: sp.csc_matrix):
        self.lu = splu(B, permc_spec="COLAMD", diag_pivot_thresh=0.1)
        self.etas: List[Tuple[int, np.ndarray]] = []

    def ftran(self, a: np.ndarray) -> np.ndarray:
        z = self.lu.solve(a)
        for r, w in self.etas:
            zr = z[r] / w[r]
            z -= zr * w
            z[r] = zr
        return z

    def btran(self, c: np.ndarray) -> np.ndarray:
        z = c.copy()
        for r, w in reversed(self.etas):
            z[r] = (z[r] - (w @ z - w[r] * z[r])) / w[r]
        return self.lu.solve(z, trans="T")

    def push(self, r: int, w: np.ndarray) -> None:
        self.etas.append((r, w.copy()))


class _Simplex:
    def __init__(self, c, A: sp.csr_matrix, row_lo, row_hi, lb, ub, cfg: SolverConfig):
        self.cfg = cfg
        m, n = A.shape
        self.m, self.n = m, n
        self.N = n + m
        self.M = sp.hstack([A, -sp.identity(m, format="csr")], format="csc")
        self.M.sort_indices()
        self.MT = self.M.T.tocsr()
        self.c = np.concatenate([np.asarray(c, float), np.zeros(m)])
        self.lb = np.concatenate([np.asarray(lb, float), row_lo])
        self.ub = np.concatenate([np.asarray(ub, float), row_hi])
        self.x = np.zeros(self.N)
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.head = np.arange(n, n + m)
        self.iterations = 0
        self.allow_perturbation = True
        self.saved_bounds: Optional[Tuple[np.ndarray, np.ndarray]] = None

    # basis bookkeeping --------------------------------------------------
    def _column(self, j: int) -> np.ndarray:
        a = np.zeros(self.m)
        lo, hi = self.M.indptr[j], self.M.indptr[j + 1]
        a[self.M.indices[lo:hi]] = self.M.data[lo:hi]
        return a

    def _place_nonbasic(self, j: int, prefer_upper: bool = False) -> None:
        lo, hi = self.lb[j], self.ub[j]
        if prefer_upper and math.isfinite(hi):
            self.x[j] = hi
        elif math.isfinite(lo):
            self.x[j] = lo
        elif math.isfinite(hi):
            self.x[j] = hi
        else:
            self.x[j] = 0.0

    def start(self, basis: Optional[Basis]) -> None:
        if basis is not None and len(basis.head) == self.m:
            self.head = np.asarray(basis.head, dtype=int).copy()
        else:
            self.head = np.arange(self.n, self.N)
        self.is_basic[:] = False
        self.is_basic[self.head] = True
        upper = basis.at_upper if basis is not None and len(basis.at_upper) == self.N else None
        for j in np.flatnonzero(~self.is_basic):
            self._place_nonbasic(j, bool(upper[j]) if upper is not None else False)
        if not self._refactor():
            self._slack_restart()

    def _slack_restart(self) -> None:
        """Fall back to the all-logical basis after a singular factorisation."""
        for j in self.head:
            if j < self.n:
                lo, hi = self.lb[j], self.ub[j]
                if math.isfinite(lo) and math.isfinite(hi):
                    self.x[j] = lo if self.x[j] - lo <= hi - self.x[j] else hi
                else:
                    self._place_nonbasic(j)
        self.head = np.arange(self.n, self.N)
        self.is_basic[:] = False
        self.is_basic[self.head] = True
        if not self._refactor():
            raise RuntimeError("logical basis failed to factorise")

    def _refactor(self) -> bool:
        B = self.M[:, self.head].tocsc()
        try:
            self.factor = _Factor(B)
        except RuntimeError:
            return False
        xn = self.x.copy()
        xn[self.head] = 0.0
        xb = self.factor.ftran(-(self.M @ xn))
        if not np.all(np.isfinite(xb)):
            return False
        self.x[self.head] = xb
        return True

    def basis(self) -> Basis:
        at_upper = np.zeros(self.N, dtype=bool)
        nb = ~self.is_basic
        at_upper[nb] = (self.x[nb] == self.ub[nb]) & (self.x[nb] != self.lb[nb])
        return Basis(self.head.copy(), at_upper)

    # degeneracy handling ------------------------------------------------
    def perturb(self) -> None:
        """Widen every finite bound by a small seeded random amount."""
        self.saved_bounds = (self.lb.copy(), self.ub.copy())
        rng = np.random.default_rng(12345)
        scale = self.cfg.perturbation
        xi_lo = scale * (1.0 + rng.random(self.N)) * (1.0 + np.abs(np.nan_to_num(self.lb, posinf=0, neginf=0)))
        xi_hi = scale * (1.0 + rng.random(self.N)) * (1.0 + np.abs(np.nan_to_num(self.ub, posinf=0, neginf=0)))
        fixed = self.lb == self.ub
        xi_lo[fixed] = 0.0
        xi_hi[fixed] = 0.0
        nb = ~self.is_basic
        at_lo = nb & (self.x == self.lb)
        at_hi = nb & (self.x == self.ub) & ~at_lo
        self.lb = self.lb - xi_lo
        self.ub = self.ub + xi_hi
        self.x[at_lo] = self.lb[at_lo]
        self.x[at_hi] = self.ub[at_hi]
        self.allow_perturbation = False
        self._refactor_or_restart()

    def unperturb(self) -> None:
        """Restore the true bounds and snap nonbasic variables back onto them."""
        lo, hi = self.saved_bounds
        self.saved_bounds = None
        nb = np.flatnonzero(~self.is_basic)
        for j in nb:
            xj = self.x[j]
            if xj <= self.lb[j] or (math.isfinite(lo[j]) and abs(xj - lo[j]) <= abs(xj - hi[j])):
                self.x[j] = lo[j] if math.isfinite(lo[j]) else (hi[j] if math.isfinite(hi[j]) else 0.0)
            else:
                self.x[j] = hi[j] if math.isfinite(hi[j]) else lo[j]
        self.lb, self.ub = lo, hi
        self._refactor_or_restart()

    def _shift_residue(self, below: np.ndarray, above: np.ndarray) -> bool:
        """Absorb violations no larger than ``shift_tol`` by moving the bounds.

        The true bounds are kept with the perturbation backup and restored
        before the final pass.
        """
        xb = self.x[self.head]
        viol = np.maximum(self.lb[self.head] - xb, 0.0) + np.maximum(xb - self.ub[self.head], 0.0)
        if viol.max(initial=0.0) > self.cfg.shift_tol:
            return False
        if self.saved_bounds is None and self.allow_perturbation:
            self.saved_bounds = (self.lb.copy(), self.ub.copy())
        lo_idx = self.head[below]
        hi_idx = self.head[above]
        self.lb[lo_idx] = self.x[lo_idx]
        self.ub[hi_idx] = self.x[hi_idx]
        return True

    def _refactor_or_restart(self) -> None:
        if not self._refactor():
            self._slack_restart()

    # main loop ----------------------------------------------------------
    def run(self) -> str:
        cfg = self.cfg
        ftol, otol = cfg.feasibility_tol, cfg.optimality_tol
        degenerate = 0
        since_refactor = 0
        refreshed = False
        while True:
            xb = self.x[self.head]
            lbb, ubb = self.lb[self.head], self.ub[self.head]
            below = xb < lbb - ftol
            above = xb > ubb + ftol
            phase1 = bool(below.any() or above.any())
            if phase1:
                cb = np.where(below, -1.0, np.where(above, 1.0, 0.0))
                cost = None
                level = float(np.sum((lbb - xb)[below]) + np.sum((xb - ubb)[above]))
            else:
                cb = self.c[self.head]
                cost = self.c
                level = abs(float(self.c @ self.x))
            # steps gaining less than this count as degenerate
            negligible = 1e-11 * (1.0 + level)
            y = self.factor.btran(cb)
            d = -(self.MT @ y)
            if cost is not None:
                d += cost
            d[self.is_basic] = 0.0

            # pricing
            x, lb, ub = self.x, self.lb, self.ub
            can_up = (~self.is_basic) & (x < ub) & (d < -otol)
            can_down = (~self.is_basic) & (x > lb) & (d > otol)
            eligible = can_up | can_down
            if not eligible.any():
                if not phase1:
                    return OPTIMAL
                if not refreshed:
                    # recompute basic values before trusting a phase-1 stall
                    refreshed = True
                    self._refactor_or_restart()
                    since_refactor = 0
                    continue
                if self._shift_residue(below, above):
                    continue
                return INFEASIBLE
            refreshed = False
            if self.iterations >= cfg.max_iterations:
                return ITERATION_LIMIT
            if degenerate >= cfg.degenerate_limit and self.allow_perturbation:
                self.perturb()
                degenerate = 0
                since_refactor = 0
                continue
            if degenerate >= cfg.degenerate_limit:
                q = int(np.flatnonzero(eligible)[0])
            else:
                score = np.where(eligible, np.abs(d), -1.0)
                q = int(np.argmax(score))
            direction = 1.0 if can_up[q] else -1.0

            w = self.factor.ftran(self._column(q))
            # basic values move by -direction * w per unit step
            delta = -direction * w
            p, theta, bound_hit = self._ratio(delta, xb, lbb, ubb, phase1, degenerate >= cfg.degenerate_limit)
            flip = ub[q] - lb[q]
            if p < 0 and not math.isfinite(flip):
                if phase1:
                    # cannot happen for a bounded phase-1 objective; treat as numerical trouble
                    if not self._refactor():
                        self._slack_restart()
                    since_refactor = 0
                    self.iterations += 1
                    continue
                return UNBOUNDED
            self.iterations += 1
            if math.isfinite(flip) and (p < 0 or flip <= theta):
                # entering variable runs to its opposite bound; basis unchanged
                self.x[self.head] += flip * delta
                self.x[q] = ub[q] if direction > 0 else lb[q]
                degenerate = 0 if abs(d[q]) * flip > negligible else degenerate + 1
                continue
            self.x[self.head] += theta * delta
            self.x[q] += direction * theta
            leaving = int(self.head[p])
            self.x[leaving] = bound_hit
            self.is_basic[leaving] = False
            self.is_basic[q] = True
            self.head[p] = q
            degenerate = degenerate + 1 if abs(d[q]) * theta <= negligible else 0
            since_refactor += 1
            if since_refactor >= cfg.refactor_interval:
                since_refactor = 0
                self._refactor_or_restart()
            else:
                self.factor.push(p, w)

    def _ratio(self, delta, xb, lbb, ubb, phase1: bool, bland: bool):
        """Harris two-pass ratio test. Returns (row, step, value the leaving variable takes)."""
        ftol, ptol = self.cfg.feasibility_tol, self.cfg.pivot_tol
        dist = np.full(self.m, np.inf)
        target = np.full(self.m, np.nan)
        dec = delta < -ptol
        inc = delta > ptol
        # decreasing variables block at ub if currently above it, else at lb if currently feasible
        dec_above = dec & (xb > ubb + ftol)
        dec_lb = dec & ~dec_above & (xb >= lbb - ftol) & np.isfinite(lbb)
        inc_below = inc & (xb < lbb - ftol)
        inc_ub = inc & ~inc_below & (xb <= ubb + ftol) & np.isfinite(ubb)
        dist[dec_above] = xb[dec_above] - ubb[dec_above]
        target[dec_above] = ubb[dec_above]
        dist[dec_lb] = xb[dec_lb] - lbb[dec_lb]
        target[dec_lb] = lbb[dec_lb]
        dist[inc_below] = lbb[inc_below] - xb[inc_below]
        target[inc_below] = lbb[inc_below]
        dist[inc_ub] = ubb[inc_ub] - xb[inc_ub]
        target[inc_ub] = ubb[inc_ub]
        cand = np.isfinite(dist)
        if not cand.any():
            return -1, math.inf, math.nan
        rate = np.abs(delta)
        safe_rate = np.where(cand, rate, 1.0)
        if bland:
            ratios = np.where(cand, np.maximum(dist, 0.0) / safe_rate, np.inf)
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, best))
            heads = self.head[ties]
            p = int(ties[np.argmin(heads)])
            return p, float(ratios[p]), float(target[p])
        # slack is measured from the true bound, so nothing drifts past it by more than ftol/2
        relaxed = np.where(cand, np.maximum(dist + 0.5 * ftol, 0.0) / safe_rate, np.inf)
        theta_max = relaxed.min()
        exact = np.where(cand, np.maximum(dist, 0.0) / safe_rate, np.inf)
        pool = np.flatnonzero(exact <= theta_max)
        p = int(pool[np.argmax(rate[pool])])
        return p, float(max(exact[p], 0.0)), float(target[p])


def _segment_extremes(indptr: np.ndarray, data: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Min and max of each compressed row/column; 1.0 for empty ones."""
    k = len(indptr) - 1
    lo = np.ones(k)
    hi = np.ones(k)
    nonempty = np.flatnonzero(np.diff(indptr) > 0)
    if nonempty.size:
        starts = indptr[nonempty]
        lo[nonempty] = np.minimum.reduceat(data, starts)
        hi[nonempty] = np.maximum.reduceat(data, starts)
    return lo, hi


def scale_factors(A: sp.csr_matrix, passes: int = 6) -> Tuple[np.ndarray, np.ndarray]:
    """Geometric-mean row and column scale factors, rounded to powers of two."""
    m, n = A.shape
    row = np.ones(m)
    col = np.ones(n)
    B = abs(sp.csr_matrix(A, dtype=float))
    B.eliminate_zeros()
    if B.nnz == 0:
        return row, col
    for _ in range(passes):
        S = (sp.diags(row) @ B @ sp.diags(col)).tocsr()
        lo, hi = _segment_extremes(S.indptr, S.data)
        row /= np.sqrt(lo * hi)
        S = (sp.diags(row) @ B @ sp.diags(col)).tocsc()
        lo, hi = _segment_extremes(S.indptr, S.data)
        col /= np.sqrt(lo * hi)
    return np.exp2(np.round(np.log2(row))), np.exp2(np.round(np.log2(col)))


def simplex_arrays(c, A, senses, rhs, lb, ub, cfg: SolverConfig, basis: Optional[Basis] = None,
                   scaling: Optional[Tuple[np.ndarray, np.ndarray]] = None):
    """Core entry point on raw arrays. Returns (status, x, iterations, basis).

    The problem is solved in scaled form ``(R A S) y = R b`` with ``x = S y``;
    ``scaling`` may pass precomputed ``(R, S)`` diagonals.
    """
    A = sp.csr_matrix(A, dtype=float)
    m, n = A.shape
    lb = np.asarray(lb, float)
    ub = np.asarray(ub, float)
    c = np.asarray(c, float)
    if np.any(lb > ub):
        return INFEASIBLE, None, 0, None
    if m == 0:
        x = np.where(c > 0, lb, np.where(c < 0, ub, np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))))
        if not np.all(np.isfinite(x)):
            return UNBOUNDED, None, 0, None
        return OPTIMAL, x, 0, None
    row, col = scaling if scaling is not None else scale_factors(A)
    As = (sp.diags(row) @ A @ sp.diags(col)).tocsr()
    row_lo, row_hi = row_bounds(senses, np.asarray(rhs, float) * row)
    s = _Simplex(c * col, As, row_lo, row_hi, lb / col, ub / col, cfg)
    s.start(basis)
    status = s.run()
    if s.saved_bounds is not None and status != INFEASIBLE:
        s.unperturb()
        status = s.run()
    if status == OPTIMAL and not s._refactor():
        s._slack_restart()
        status = s.run()
    x = None
    if status == OPTIMAL:
        x = np.clip(s.x[:n] * col, lb, ub)
    return status, x, s.iterations, s.basis()


def solve_lp(lp, cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Solve the continuous relaxation of ``lp`` (integrality flags are ignored)."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    c, A, senses, rhs, lb, ub, _ = lp.arrays()
    status, x, iters, _ = simplex_arrays(c, A, senses, rhs, lb, ub, cfg)
    obj = lp.objective_value(x) if status == OPTIMAL else math.nan
    return SolveResult(status, obj, x, iters, time.perf_counter() - t0)
