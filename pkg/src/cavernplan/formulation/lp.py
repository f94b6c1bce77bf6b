"""Solver-agnostic linear program container and the variable index map."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)
INF = math.inf


@dataclass(frozen=True)
class Constraint:
    name: str
    indices: Tuple[int, ...]
    coefs: Tuple[float, ...]
    sense: str
    rhs: float


class LinearProgram:
    """Minimise ``c @ x + objective_offset`` subject to row constraints and bounds.

    Builders append variables and rows; names must be unique. ``cost_terms``
    keeps each named objective component (coefficients plus a constant) so a
    realised cost can be split after solving; the objective is their sum.
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.var_names: List[str] = []
        self.lb: List[float] = []
        self.ub: List[float] = []
        self.integer: List[bool] = []
        self.constraints: List[Constraint] = []
        self.objective: Dict[int, float] = {}
        self.objective_offset = 0.0
        self.cost_terms: Dict[str, Dict[int, float]] = {}
        self.cost_offsets: Dict[str, float] = {}
        self._var_index: Dict[str, int] = {}
        self._con_index: Dict[str, int] = {}

    # construction -------------------------------------------------------
    def add_variable(self, name: str, lb: float = 0.0, ub: float = INF, integer: bool = False) -> int:
        if name in self._var_index:
            raise ValueError(f"duplicate variable name {name!r}")
        if lb > ub:
            raise ValueError(f"variable {name!r}: lower bound {lb} exceeds upper bound {ub}")
        idx = len(self.var_names)
        self._var_index[name] = idx
        self.var_names.append(name)
        self.lb.append(float(lb))
        self.ub.append(float(ub))
        self.integer.append(bool(integer))
        return idx

    def add_constraint(self, name: str, terms: Iterable[Tuple[int, float]], sense: str, rhs: float) -> int:
        if name in self._con_index:
            raise ValueError(f"duplicate constraint name {name!r}")
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        merged: Dict[int, float] = {}
        n = len(self.var_names)
        for idx, coef in terms:
            if not 0 <= idx < n:
                raise IndexError(f"constraint {name!r} references undeclared variable {idx}")
            merged[idx] = merged.get(idx, 0.0) + float(coef)
        items = sorted((i, c) for i, c in merged.items() if c != 0.0)
        self._con_index[name] = len(self.constraints)
        self.constraints.append(Constraint(
            name, tuple(i for i, _ in items), tuple(c for _, c in items), sense, float(rhs)))
        return len(self.constraints) - 1

    def add_cost(self, term: str, idx: int, coef: float) -> None:
        if coef == 0.0:
            self.cost_terms.setdefault(term, {})
            return
        bucket = self.cost_terms.setdefault(term, {})
        bucket[idx] = bucket.get(idx, 0.0) + coef
        self.objective[idx] = self.objective.get(idx, 0.0) + coef

    def add_cost_constant(self, term: str, value: float) -> None:
        self.cost_terms.setdefault(term, {})
        self.cost_offsets[term] = self.cost_offsets.get(term, 0.0) + value
        self.objective_offset += value

    # queries ------------------------------------------------------------
    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def var(self, name: str) -> int:
        return self._var_index[name]

    def con(self, name: str) -> int:
        return self._con_index[name]

    def constraint(self, name: str) -> Constraint:
        return self.constraints[self._con_index[name]]

    def has_integers(self) -> bool:
        return any(self.integer)

    def cost_vector(self) -> np.ndarray:
        c = np.zeros(self.num_vars)
        for i, v in self.objective.items():
            c[i] = v
        return c

    def matrix(self) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        for r, con in enumerate(self.constraints):
            rows.extend([r] * len(con.indices))
            cols.extend(con.indices)
            vals.extend(con.coefs)
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.num_constraints, self.num_vars))

    def arrays(self):
        """(c, A, senses, rhs, lb, ub, integer) as numpy/scipy objects."""
        return (
            self.cost_vector(),
            self.matrix(),
            np.array([c.sense for c in self.constraints], dtype=object),
            np.array([c.rhs for c in self.constraints], dtype=float),
            np.array(self.lb, dtype=float),
            np.array(self.ub, dtype=float),
            np.array(self.integer, dtype=bool),
        )

    def objective_value(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        return float(sum(c * x[i] for i, c in self.objective.items()) + self.objective_offset)

    def cost_breakdown(self, x: Sequence[float]) -> Dict[str, float]:
        x = np.asarray(x, dtype=float)
        return {
            term: float(sum(c * x[i] for i, c in coefs.items()) + self.cost_offsets.get(term, 0.0))
            for term, coefs in self.cost_terms.items()
        }

    def residuals(self, x: Sequence[float]) -> np.ndarray:
        """Signed violation per row (positive means violated)."""
        x = np.asarray(x, dtype=float)
        act = self.matrix() @ x
        out = np.empty(self.num_constraints)
        for r, con in enumerate(self.constraints):
            if con.sense == LE:
                out[r] = act[r] - con.rhs
            elif con.sense == GE:
                out[r] = con.rhs - act[r]
            else:
                out[r] = abs(act[r] - con.rhs)
        return out

    def max_violation(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        rows = self.residuals(x)
        lo = np.array(self.lb) - x
        hi = x - np.array(self.ub)
        parts = [rows.max(initial=0.0), lo.max(initial=0.0), hi.max(initial=0.0)]
        return float(max(parts))

    def copy(self) -> "LinearProgram":
        other = LinearProgram(self.name)
        other.var_names = list(self.var_names)
        other.lb = list(self.lb)
        other.ub = list(self.ub)
        other.integer = list(self.integer)
        other.constraints = list(self.constraints)
        other.objective = dict(self.objective)
        other.objective_offset = self.objective_offset
        other.cost_terms = {k: dict(v) for k, v in self.cost_terms.items()}
        other.cost_offsets = dict(self.cost_offsets)
        other._var_index = dict(self._var_index)
        other._con_index = dict(self._con_index)
        return other

    def family_counts(self) -> Dict[str, int]:
        """Row count per equation tag (the name prefix before the first dot)."""
        counts: Dict[str, int] = defaultdict(int)
        for con in self.constraints:
            counts[con.name.split(".", 1)[0]] += 1
        return dict(counts)

    def structure(self) -> tuple:
        """Hashable snapshot used for determinism checks."""
        return (
            tuple(self.var_names), tuple(self.lb), tuple(self.ub), tuple(self.integer),
            tuple(self.constraints), tuple(sorted(self.objective.items())), self.objective_offset,
        )


Key = Tuple[str, Optional[str], Optional[int]]


class VariableMap:
    """Lookup from (role, owner, hour) to LP column.

    ``owner`` is a thermal class id, ``"wind"``, ``"solar"``, ``"storage"`` or a
    unit label such as ``"coal#2"`` for oracle per-unit roles; ``hour`` is
    ``None`` for capacity variables.
    """

    def __init__(self):
        self._index: Dict[Key, int] = {}
        self._by_role: Dict[Tuple[str, Optional[str]], Dict[int, int]] = defaultdict(dict)

    def add(self, role: str, owner: Optional[str], hour: Optional[int], index: int) -> int:
        key = (role, owner, hour)
        if key in self._index:
            raise ValueError(f"duplicate variable key {key}")
        self._index[key] = index
        if hour is not None:
            self._by_role[(role, owner)][hour] = index
        return index

    def get(self, role: str, owner: Optional[str] = None, hour: Optional[int] = None) -> int:
        return self._index[(role, owner, hour)]

    def find(self, role: str, owner: Optional[str] = None, hour: Optional[int] = None) -> Optional[int]:
        return self._index.get((role, owner, hour))

    def __contains__(self, key) -> bool:
        return key in self._index

    def __len__(self) -> int:
        return len(self._index)

    def keys(self):
        return self._index.keys()

    def items(self):
        return self._index.items()

    def hourly(self, role: str, owner: Optional[str] = None) -> np.ndarray:
        by_hour = self._by_role.get((role, owner))
        if not by_hour:
            raise KeyError((role, owner))
        return np.array([by_hour[t] for t in sorted(by_hour)], dtype=int)

    def has_role(self, role: str, owner: Optional[str] = None) -> bool:
        return (role, owner) in self._by_role or (role, owner, None) in self._index

    def values(self, x: Sequence[float], role: str, owner: Optional[str] = None) -> np.ndarray:
        return np.asarray(x, dtype=float)[self.hourly(role, owner)]

    def roles(self) -> List[Tuple[str, Optional[str]]]:
        seen = []
        for role, owner, _ in self._index:
            if (role, owner) not in seen:
                seen.append((role, owner))
        return seen
