"""Branch-and-bound over {0,1} variables on top of the simplex.

Nodes are explored best-first by LP bound; until the first incumbent is found
the search plunges depth-first so that pruning starts early. Children inherit
the parent's final basis. Ties are broken by node creation order, so the
search is deterministic.
"""

from __future__ import annotations

import heapq
import math
import time
from typing import Dict, List, Optional, Tuple

import numpy as np

from .simplex import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    Basis,
    SolveResult,
    SolverConfig,
    simplex_arrays,
)


def _branch_variable(x: np.ndarray, integer_idx: np.ndarray, tol: float) -> int:
    """Most fractional integer variable (lowest index on ties), or -1."""
    if integer_idx.size == 0:
        return -1
    vals = x[integer_idx]
    frac = np.abs(vals - np.round(vals))
    k = int(np.argmax(frac))
    return int(integer_idx[k]) if frac[k] > tol else -1


def solve_mip(lp, cfg: Optional[SolverConfig] = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    c, A, senses, rhs, lb0, ub0, integer = lp.arrays()
    integer_idx = np.flatnonzero(integer)
    if integer_idx.size and (np.any(lb0[integer_idx] < 0) or np.any(ub0[integer_idx] > 1)):
        raise ValueError("integrality flags are only supported on {0,1}-bounded variables")
    offset = lp.objective_offset

    def objective(x):
        return float(c @ x) + offset

    incumbent: Optional[np.ndarray] = None
    best = math.inf
    history: List[float] = []
    iterations = 0
    nodes = 0
    counter = 0
    # heap entries: (bound, seq, lb, ub, basis)
    heap: List[Tuple[float, int, np.ndarray, np.ndarray, Optional[Basis]]] = []
    dive: List[Tuple[float, int, np.ndarray, np.ndarray, Optional[Basis]]] = [(-math.inf, 0, lb0, ub0, None)]
    root_bound = math.nan
    limit_hit = False

    def cutoff() -> float:
        return best - cfg.bnb_gap_tol * max(1.0, abs(best))

    while dive or heap:
        if nodes >= cfg.bnb_node_limit or iterations >= cfg.max_iterations:
            limit_hit = True
            break
        if dive:
            bound, _, lb, ub, basis = dive.pop()
        else:
            bound, _, lb, ub, basis = heapq.heappop(heap)
        if bound >= cutoff():
            continue
        nodes += 1
        status, x, its, new_basis = simplex_arrays(c, A, senses, rhs, lb, ub, cfg, basis)
        iterations += its
        if status == UNBOUNDED and nodes == 1:
            return SolveResult(UNBOUNDED, math.nan, None, iterations, time.perf_counter() - t0, nodes)
        if status == ITERATION_LIMIT:
            limit_hit = True
            break
        if status != OPTIMAL:
            continue
        value = objective(x)
        if nodes == 1:
            root_bound = value
        if value >= cutoff():
            continue
        j = _branch_variable(x, integer_idx, cfg.integrality_tol)
        if j < 0:
            xi = x.copy()
            xi[integer_idx] = np.round(xi[integer_idx])
            incumbent, best = xi, value
            history.append(best)
            # the plunge ends once an incumbent exists; remaining dive nodes go to the heap
            for item in dive:
                heapq.heappush(heap, item)
            dive = []
            continue
        children = []
        for branch_val in (0.0, 1.0):
            clb, cub = lb.copy(), ub.copy()
            clb[j] = cub[j] = branch_val
            counter += 1
            children.append((value, counter, clb, cub, new_basis))
        # dive into the child nearer the relaxed value, keep the other for later
        near, far = (children[0], children[1]) if x[j] < 0.5 else (children[1], children[0])
        if incumbent is None:
            dive.append(far)
            dive.append(near)
        else:
            heapq.heappush(heap, near)
            heapq.heappush(heap, far)

    wall = time.perf_counter() - t0
    open_bounds = [item[0] for item in heap] + [item[0] for item in dive]
    if limit_hit:
        bound = min([best] + open_bounds) if open_bounds else best
        return SolveResult(ITERATION_LIMIT, best if incumbent is not None else math.nan, None,
                           iterations, wall, nodes, bound, incumbent, tuple(history))
    if incumbent is None:
        return SolveResult(INFEASIBLE, math.nan, None, iterations, wall, nodes, root_bound)
    return SolveResult(OPTIMAL, lp.objective_value(incumbent), incumbent, iterations, wall, nodes,
                       root_bound, incumbent, tuple(history))
