"""MPS export and import.

The writer emits the classic section layout (NAME, ROWS, COLUMNS, RHS,
BOUNDS, ENDATA) with one entry per line. Names may be longer than the
historical 8 characters, so fields are aligned to the longest name and the
reader splits on whitespace; names therefore must not contain whitespace.

Conventions:

* the objective is the ``N`` row ``OBJ`` (suffixed with ``_`` until unique);
  a constant objective term is written as the negated RHS of that row;
* numbers use Python's shortest round-trip repr with a trailing ``.0``
  removed, so parsing recovers every coefficient exactly;
* integer columns sit between ``MARKER``/``INTORG`` and ``INTEND`` lines and
  always carry explicit bounds;
* every column is listed in COLUMNS, even when it has no nonzeros, so the
  variable order survives a round trip.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..formulation.lp import EQ, GE, INF, LE, LinearProgram

MAX_NAME = 255
_SENSE_CODE = {LE: "L", GE: "G", EQ: "E"}
_CODE_SENSE = {v: k for k, v in _SENSE_CODE.items()}


class MPSError(ValueError):
    pass


def format_number(value: float) -> str:
    text = repr(float(value))
    if text.endswith(".0"):
        text = text[:-2]
    if text == "-0":
        text = "0"
    return text


def _check_name(name: str, kind: str) -> None:
    if not name or len(name) > MAX_NAME or any(ch.isspace() for ch in name):
        raise MPSError(f"{kind} name {name!r} must be 1-{MAX_NAME} characters without whitespace")


def _objective_row_name(lp: LinearProgram) -> str:
    taken = {c.name for c in lp.constraints}
    name = "OBJ"
    while name in taken:
        name += "_"
    return name


def export_mps(lp: LinearProgram) -> str:
    """Render ``lp`` as MPS text (minimisation)."""
    seen_rows, seen_cols = set(), set()
    for con in lp.constraints:
        _check_name(con.name, "row")
        if con.name in seen_rows:
            raise MPSError(f"duplicate row name {con.name!r}")
        seen_rows.add(con.name)
    for name in lp.var_names:
        _check_name(name, "column")
        if name in seen_cols:
            raise MPSError(f"duplicate column name {name!r}")
        seen_cols.add(name)
    _check_name(lp.name, "model")

    obj = _objective_row_name(lp)
    row_w = max([len(obj)] + [len(c.name) for c in lp.constraints])
    col_w = max([len("MARKER"), len("RHS"), len("BND")] + [len(n) for n in lp.var_names])

    # column-major view of the matrix
    entries: List[List[Tuple[str, float]]] = [[] for _ in range(lp.num_vars)]
    for j, coef in sorted(lp.objective.items()):
        if coef != 0.0:
            entries[j].append((obj, coef))
    for con in lp.constraints:
        for j, coef in zip(con.indices, con.coefs):
            entries[j].append((con.name, coef))

    out = [f"NAME          {lp.name}", "ROWS", f" N  {obj}"]
    out += [f" {_SENSE_CODE[c.sense]}  {c.name}" for c in lp.constraints]
    out.append("COLUMNS")
    in_int = False

    def marker(tag: str) -> str:
        quoted = "'MARKER'"
        return f"    {'MARKER':<{col_w}}  {quoted:<{row_w}}  '{tag}'"

    for j, name in enumerate(lp.var_names):
        if lp.integer[j] != in_int:
            out.append(marker("INTORG" if lp.integer[j] else "INTEND"))
            in_int = lp.integer[j]
        for row, coef in entries[j] or [(obj, 0.0)]:
            out.append(f"    {name:<{col_w}}  {row:<{row_w}}  {format_number(coef)}")
    if in_int:
        out.append(marker("INTEND"))
    out.append("RHS")
    if lp.objective_offset != 0.0:
        out.append(f"    {'RHS':<{col_w}}  {obj:<{row_w}}  {format_number(-lp.objective_offset)}")
    for con in lp.constraints:
        if con.rhs != 0.0:
            out.append(f"    {'RHS':<{col_w}}  {con.name:<{row_w}}  {format_number(con.rhs)}")
    out.append("BOUNDS")
    for j, name in enumerate(lp.var_names):
        for kind, value in _bound_records(lp.lb[j], lp.ub[j], lp.integer[j]):
            if value is None:
                out.append(f" {kind} {'BND':<{col_w}}  {name}")
            else:
                out.append(f" {kind} {'BND':<{col_w}}  {name:<{row_w}}  {format_number(value)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def _bound_records(lb: float, ub: float, integer: bool) -> List[Tuple[str, Optional[float]]]:
    if lb == ub:
        return [("FX", lb)]
    if lb == -INF and ub == INF:
        return [("FR", None)]
    records: List[Tuple[str, Optional[float]]] = []
    if lb == -INF:
        records.append(("MI", None))
    elif lb != 0.0 or (integer and ub == INF):
        records.append(("LO", lb))
    if ub != INF:
        records.append(("UP", ub))
    elif integer:
        records.append(("PL", None))
    return records


def parse_mps(text: str) -> LinearProgram:
    """Read MPS text into a LinearProgram.

    Ranged rows become two one-sided constraints: the row itself plus
    ``<name>.range`` for the other side.
    """
    section = None
    name = "model"
    obj_row: Optional[str] = None
    row_sense: Dict[str, str] = {}
    row_order: List[str] = []
    col_order: List[str] = []
    col_integer: Dict[str, bool] = {}
    coefs: Dict[str, List[Tuple[str, float]]] = {}
    rhs: Dict[str, float] = {}
    ranges: Dict[str, float] = {}
    bounds: Dict[str, List[float]] = {}
    in_int = False

    def number(tok: str, lineno: int) -> float:
        try:
            return float(tok)
        except ValueError:
            raise MPSError(f"line {lineno}: bad number {tok!r}") from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if not raw[0].isspace():
            parts = raw.split()
            section = parts[0].upper()
            if section == "NAME":
                name = parts[1] if len(parts) > 1 else "model"
            elif section == "ENDATA":
                break
            elif section not in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "OBJSENSE"):
                raise MPSError(f"line {lineno}: unknown section {section!r}")
            continue
        f = raw.split()
        if section == "ROWS":
            if len(f) != 2 or f[0].upper() not in ("N", "L", "G", "E"):
                raise MPSError(f"line {lineno}: malformed ROWS record")
            code, rname = f[0].upper(), f[1]
            if rname in row_sense or rname == obj_row:
                raise MPSError(f"line {lineno}: duplicate row {rname!r}")
            if code == "N":
                if obj_row is None:
                    obj_row = rname
                continue
            row_sense[rname] = _CODE_SENSE[code]
            row_order.append(rname)
        elif section == "COLUMNS":
            if len(f) >= 3 and f[1].strip("'") == "MARKER":
                tag = f[2].strip("'").upper()
                in_int = tag == "INTORG"
                continue
            if len(f) not in (3, 5):
                raise MPSError(f"line {lineno}: malformed COLUMNS record")
            cname = f[0]
            if cname not in coefs:
                if cname in col_integer:
                    raise MPSError(f"line {lineno}: column {cname!r} is not contiguous")
                col_order.append(cname)
                coefs[cname] = []
                col_integer[cname] = in_int
            elif col_order[-1] != cname:
                raise MPSError(f"line {lineno}: column {cname!r} is not contiguous")
            for k in range(1, len(f), 2):
                coefs[cname].append((f[k], number(f[k + 1], lineno)))
        elif section in ("RHS", "RANGES"):
            if len(f) not in (2, 3, 4, 5):
                raise MPSError(f"line {lineno}: malformed {section} record")
            # with an odd field count the first token is the set name
            pairs = f[1:] if len(f) in (3, 5) else f
            target = rhs if section == "RHS" else ranges
            for k in range(0, len(pairs), 2):
                target[pairs[k]] = number(pairs[k + 1], lineno)
        elif section == "BOUNDS":
            kind = f[0].upper()
            if kind in ("FR", "MI", "PL", "BV"):
                if len(f) not in (2, 3, 4):
                    raise MPSError(f"line {lineno}: malformed BOUNDS record")
                cname, value = f[2] if len(f) >= 3 else f[1], None
            else:
                if len(f) not in (3, 4):
                    raise MPSError(f"line {lineno}: malformed BOUNDS record")
                cname, value = f[-2], number(f[-1], lineno)
            if cname not in coefs:
                raise MPSError(f"line {lineno}: bound on unknown column {cname!r}")
            b = bounds.setdefault(cname, [0.0, INF])
            if kind == "UP":
                if value < 0 and b[0] == 0.0:
                    b[0] = -INF
                b[1] = value
            elif kind == "LO":
                b[0] = value
            elif kind == "FX":
                b[0] = b[1] = value
            elif kind == "FR":
                b[0], b[1] = -INF, INF
            elif kind == "MI":
                b[0] = -INF
            elif kind == "PL":
                b[1] = INF
            elif kind == "BV":
                b[0], b[1] = 0.0, 1.0
                col_integer[cname] = True
            elif kind == "LI":
                b[0] = value
                col_integer[cname] = True
            elif kind == "UI":
                b[1] = value
                col_integer[cname] = True
            else:
                raise MPSError(f"line {lineno}: unknown bound type {kind!r}")
        elif section == "OBJSENSE":
            if f[0].upper() not in ("MIN", "MINIMIZE"):
                raise MPSError("only minimisation models are supported")
        else:
            raise MPSError(f"line {lineno}: data outside a section")

    lp = LinearProgram(name)
    for cname in col_order:
        lo, hi = bounds.get(cname, [0.0, INF])
        lp.add_variable(cname, lo, hi, integer=col_integer[cname])
    rows: Dict[str, List[Tuple[int, float]]] = {r: [] for r in row_order}
    for cname in col_order:
        j = lp.var(cname)
        for rname, value in coefs[cname]:
            if rname == obj_row:
                if value != 0.0:
                    lp.add_cost("objective", j, value)
            elif rname in rows:
                rows[rname].append((j, value))
            else:
                raise MPSError(f"column {cname!r} references unknown row {rname!r}")
    for rname in row_order:
        sense = row_sense[rname]
        b = rhs.get(rname, 0.0)
        if rname in ranges:
            r = ranges[rname]
            if sense == EQ:
                lo, hi = (b, b + r) if r >= 0 else (b + r, b)
            elif sense == LE:
                lo, hi = b - abs(r), b
            else:
                lo, hi = b, b + abs(r)
            lp.add_constraint(rname, rows[rname], GE, lo)
            lp.add_constraint(f"{rname}.range", rows[rname], LE, hi)
        else:
            lp.add_constraint(rname, rows[rname], sense, b)
    if obj_row is not None and obj_row in rhs:
        lp.add_cost_constant("objective", -rhs[obj_row])
    unknown = set(rhs) - set(row_order) - {obj_row}
    if unknown:
        raise MPSError(f"RHS references unknown rows {sorted(unknown)}")
    return lp
