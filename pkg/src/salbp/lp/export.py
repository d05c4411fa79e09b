"""Fixed-format MPS and CPLEX-style LP text writers."""

from __future__ import annotations

from salbp.errors import NameTooLong

_SENSE_MPS = {"<=": "L", ">=": "G", "=": "E"}


def _num(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e11:
        return str(int(v))
    for digits in (12, 11, 10, 9, 8, 7, 6):
        text = f"{v:.{digits}g}"
        if len(text) <= 12:
            return text
    raise ValueError(f"cannot fit {v!r} into an MPS number field")


def _safe(name: str) -> bool:
    return 0 < len(name) <= 8 and " " not in name and not name.startswith("$")


def mps_names(model) -> tuple[list[str], list[str]]:
    """Column and row names used in the MPS file (8 characters at most)."""
    cols = [v.name for v in model.variables]
    if not all(_safe(n) for n in cols) or len(set(cols)) != len(cols):
        cols = [f"C{j + 1:07d}" for j in range(len(cols))]
    rows = [f"R{i + 1}" for i in range(model.n_rows)]
    return cols, rows


def mps_name_map(model) -> dict[str, str]:
    """Sidecar mapping from MPS names to model names/tags."""
    cols, rows = mps_names(model)
    out = {c: v.name for c, v in zip(cols, model.variables)}
    out.update({r: con.tag for r, con in zip(rows, model.constraints)})
    return out


def _line(f1: str, f2: str, f3: str = "", f4: str = "") -> str:
    text = f" {f1:<2} {f2:<8}"
    if f3:
        text += f"  {f3:<8}  {f4:>12}"
    return text.rstrip()


def export_mps(model, strict: bool = False) -> str:
    """Fixed-format MPS; binaries are declared with ``BV`` bounds.

    With ``strict=True`` a model name longer than 8 characters raises
    :class:`NameTooLong` instead of being replaced by a generated name.
    """
    if strict:
        for v in model.variables:
            if not _safe(v.name):
                raise NameTooLong(f"column name {v.name!r} does not fit fixed MPS format")
    cols, rows = mps_names(model)
    by_col: list[list[tuple[str, float]]] = [[] for _ in model.variables]
    for j, coef in model.objective:
        by_col[j].append(("OBJ", coef))
    for i, con in enumerate(model.constraints):
        for j, coef in con.coefs:
            by_col[j].append((rows[i], coef))

    out = ["NAME          SALBP", "ROWS", " N  OBJ"]
    out += [f" {_SENSE_MPS[con.sense]}  {rows[i]}" for i, con in enumerate(model.constraints)]
    out.append("COLUMNS")
    for j, entries in enumerate(by_col):
        if not entries:
            entries = [("OBJ", 0.0)]
        for row, coef in entries:
            out.append("    " + f"{cols[j]:<8}  {row:<8}  {_num(coef):>12}")
    out.append("RHS")
    for i, con in enumerate(model.constraints):
        if con.rhs != 0:
            out.append("    " + f"{'RHS':<8}  {rows[i]:<8}  {_num(con.rhs):>12}")
    out.append("RANGES")
    out.append("BOUNDS")
    for j, v in enumerate(model.variables):
        if v.binary:
            out.append(_line("BV", "BND", cols[j]))
        else:
            out.append(_line("LO", "BND", cols[j], _num(v.lb)))
            out.append(_line("UP", "BND", cols[j], _num(v.ub)))
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def _expr(terms, names) -> str:
    parts = []
    for j, coef in terms:
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {_num(abs(coef))} {names[j]}")
    if not parts:
        parts = [f"+ 0 {names[0]}"] if names else ["0"]
    lines = []
    for k in range(0, len(parts), 8):
        lines.append(" ".join(parts[k : k + 8]))
    return "\n   ".join(lines)


def export_lp_text(model) -> str:
    names = [v.name for v in model.variables]
    lp_sense = {"<=": "<=", ">=": ">=", "=": "="}
    out = [f"\\ {model.name}", "Minimize", f" obj: {_expr(model.objective, names)}", "Subject To"]
    for i, con in enumerate(model.constraints):
        out.append(f" R{i + 1}: {_expr(con.coefs, names)} {lp_sense[con.sense]} {_num(con.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        if not v.binary:
            out.append(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}")
    bins = [v.name for v in model.variables if v.binary]
    if bins:
        out.append("Binaries")
        for k in range(0, len(bins), 10):
            out.append(" " + " ".join(bins[k : k + 10]))
    out.append("End")
    return "\n".join(out) + "\n"
