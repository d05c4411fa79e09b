"""Inequality families written over symbolic variable keys.

Rows are produced over the full station grid.  Model assembly later
substitutes eliminated variables by constants (see :func:`fold`).

Variable keys:

* ``("x", s, i)``  impulse variable, task ``i`` on station ``s``
* ``("xb", s, i)`` step variable, task ``i`` on station ``s`` or earlier;
  ``xb`` at station 0 is the constant 0 and never appears in a row
* ``("y", s)``     station ``s`` is used (type 1)
* ``("r", t)``     the cycle time equals ``t`` (type 2, levels 3-4)
* ``("c",)``       cycle time (type 2)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from salbp.bounds import BoundsContext, Type1, Type2
from salbp.errors import IncompatibleConfig
from salbp.formulations.config import IMPULSE, STEP, FormulationConfig

Key = tuple

LE, GE, EQ = "<=", ">=", "="

PRECEDENCE_TAGS = {f: f"prec.{f}" for f in ("PA", "BW", "TS", "RC1", "RC2", "SC")}
TAGS = (
    "occ", "cap", "cont",
    "prec.PA", "prec.BW", "prec.TS", "prec.RC1", "prec.RC2", "prec.SC",
    "lim.EL", "lim.PF1", "lim.SPF1", "lim.RT",
    "lim.PF2e", "lim.PF2l", "lim.SPF2e", "lim.SPF2l", "lim.ST",
)  # fmt: skip


@dataclass(frozen=True)
class Row:
    terms: Mapping[Key, float]
    sense: str
    rhs: float
    tag: str

    def activity(self, value) -> float:
        return sum(coef * value(k) for k, coef in self.terms.items())

    def violation(self, value) -> float:
        lhs = self.activity(value)
        if self.sense == LE:
            return lhs - self.rhs
        if self.sense == GE:
            return self.rhs - lhs
        return abs(lhs - self.rhs)


def _add(terms: dict, key: Key, coef: float) -> None:
    if key[0] == "xb" and key[1] == 0:
        return
    terms[key] = terms.get(key, 0) + coef


def _r_terms(terms: dict, cycle_times, pred) -> None:
    for t in cycle_times:
        if pred(t):
            _add(terms, ("r", t), 1)


def occurrence_rows(kind: str, ctx: BoundsContext) -> list[Row]:
    S = ctx.stations
    M = ctx.n_stations
    rows = []
    for i in ctx.instance.tasks:
        if kind == IMPULSE:
            terms = {("x", s, i): 1 for s in S}
        else:
            terms = {("xb", M, i): 1}
        rows.append(Row(terms, EQ, 1, "occ"))
    return rows


def capacity_rows(kind: str, ctx: BoundsContext) -> list[Row]:
    inst = ctx.instance
    rows = []
    for s in ctx.stations:
        terms: dict = {}
        for i in inst.tasks:
            t = inst.t(i)
            if kind == IMPULSE:
                _add(terms, ("x", s, i), t)
            else:
                _add(terms, ("xb", s, i), t)
                _add(terms, ("xb", s - 1, i), -t)
        if isinstance(ctx.spec, Type1):
            _add(terms, ("y", s), -ctx.spec.c)
        else:
            _add(terms, ("c",), -1)
        rows.append(Row(terms, LE, 0, "cap"))
    return rows


def continuity_rows(ctx: BoundsContext) -> list[Row]:
    M = ctx.n_stations
    rows = []
    for i in ctx.instance.tasks:
        for s in range(1, M):
            rows.append(Row({("xb", s, i): 1, ("xb", s + 1, i): -1}, LE, 0, "cont"))
    return rows


def precedence_rows(family: str, ctx: BoundsContext) -> list[Row]:
    """Rows of one precedence family, one group per immediate arc."""
    S = ctx.stations
    M = ctx.n_stations
    tag = PRECEDENCE_TAGS.get(family)
    if tag is None:
        raise IncompatibleConfig(f"unknown precedence family {family!r}")
    rows = []
    for i, j in sorted(ctx.instance.arcs):
        if family == "PA":
            terms: dict = {}
            for s in S:
                _add(terms, ("x", s, i), s)
                _add(terms, ("x", s, j), -s)
            rows.append(Row(terms, LE, 0, tag))
        elif family == "TS":
            terms = {}
            for s in S:
                _add(terms, ("x", s, i), M - s + 1)
                _add(terms, ("x", s, j), -(M - s + 1))
            rows.append(Row(terms, GE, 0, tag))
        elif family == "BW":
            for t in S:
                terms = {("x", t, j): 1}
                for s in range(1, t + 1):
                    _add(terms, ("x", s, i), -1)
                rows.append(Row(terms, LE, 0, tag))
        elif family == "RC1":
            for t in S:
                for s in range(t + 1, M + 1):
                    rows.append(Row({("x", s, i): 1, ("x", t, j): 1}, LE, 1, tag))
        elif family == "RC2":
            for k in S:
                terms = {}
                for s in range(k, M + 1):
                    _add(terms, ("x", s, i), 1)
                    _add(terms, ("x", s, j), -1)
                rows.append(Row(terms, LE, 0, tag))
        elif family == "SC":
            for s in S:
                rows.append(Row({("xb", s, j): 1, ("xb", s, i): -1}, LE, 0, tag))
    return rows


# -- station limits ---------------------------------------------------------


def window_rows(kind: str, ctx: BoundsContext) -> list[Row]:
    """Static windows as explicit rows (normally applied by elimination)."""
    rows = []
    for i in ctx.instance.tasks:
        E, L = ctx.E[i], ctx.L[i]
        if kind == IMPULSE:
            for s in ctx.stations:
                if not E <= s <= L:
                    rows.append(Row({("x", s, i): 1}, EQ, 0, "lim.EL"))
        else:
            if E - 1 >= 1:
                rows.append(Row({("xb", E - 1, i): 1}, EQ, 0, "lim.ST"))
            rows.append(Row({("xb", L, i): 1}, EQ, 1, "lim.ST"))
    return rows


def cycle_time_rows(ctx: BoundsContext) -> list[Row]:
    C = ctx.cycle_times
    terms: dict = {("c",): 1}
    for t in C:
        terms[("r", t)] = -t
    return [
        Row(terms, EQ, 0, "lim.RT"),
        Row({("r", t): 1 for t in C}, EQ, 1, "lim.RT"),
    ]


def _type1_dynamic(kind: str, strengthened: bool, ctx: BoundsContext) -> list[Row]:
    c = ctx.spec.c
    M = ctx.n_stations
    if kind == IMPULSE:
        tag = "lim.SPF1" if strengthened else "lim.PF1"
    else:
        tag = "lim.ST"
    rows = []
    for s in ctx.stations:
        for i in ctx.instance.tasks:
            L = ctx.latest(i, c, s)
            if L < 1:
                continue
            if kind == IMPULSE:
                terms: dict = {}
                for u in range(L, M + 1) if strengthened else (L,):
                    _add(terms, ("x", u, i), 1)
                _add(terms, ("y", s), -1)
                rows.append(Row(terms, LE, 0, tag))
            elif strengthened:
                terms = {}
                _add(terms, ("xb", L - 1, i), 1)
                _add(terms, ("y", s), 1)
                rows.append(Row(terms, GE, 1, tag))
            else:
                terms = {}
                _add(terms, ("xb", L, i), 1)
                _add(terms, ("xb", L - 1, i), -1)
                _add(terms, ("y", s), -1)
                rows.append(Row(terms, LE, 0, tag))
    return rows


def _type2_dynamic(kind: str, strengthened: bool, ctx: BoundsContext) -> list[Row]:
    m = ctx.spec.m
    c_lo, c_hi = ctx.c_lower, ctx.c_upper
    C = ctx.cycle_times
    S = ctx.stations
    rows = []
    for i in ctx.instance.tasks:
        # stations before the earliest one of some admissible cycle time
        for e in range(ctx.earliest(i, c_hi), ctx.earliest(i, c_lo)):
            if e not in S:
                continue
            group: dict = {}
            _r_terms(group, C, lambda t: e < ctx.earliest(i, t))
            terms: dict = {}
            if kind == IMPULSE:
                for u in range(1, e + 1) if strengthened else (e,):
                    _add(terms, ("x", u, i), 1)
                tag = "lim.SPF2e" if strengthened else "lim.PF2e"
            else:
                _add(terms, ("xb", e, i), 1)
                if not strengthened:
                    _add(terms, ("xb", e - 1, i), -1)
                tag = "lim.ST"
            terms.update(group)
            rows.append(Row(terms, LE, 1, tag))
        # stations after the latest one of some admissible cycle time
        for l in range(ctx.latest(i, c_lo, m) + 1, ctx.latest(i, c_hi, m) + 1):
            if l not in S:
                continue
            group = {}
            _r_terms(group, C, lambda t: ctx.latest(i, t, m) < l)
            if kind == IMPULSE:
                terms = {}
                for u in range(l, m + 1) if strengthened else (l,):
                    _add(terms, ("x", u, i), 1)
                terms.update(group)
                rows.append(Row(terms, LE, 1, "lim.SPF2l" if strengthened else "lim.PF2l"))
            elif strengthened:
                terms = {}
                _add(terms, ("xb", l - 1, i), 1)
                for k, v in group.items():
                    terms[k] = -v
                rows.append(Row(terms, GE, 0, "lim.ST"))
            else:
                terms = {}
                _add(terms, ("xb", l, i), 1)
                _add(terms, ("xb", l - 1, i), -1)
                terms.update(group)
                rows.append(Row(terms, LE, 1, "lim.ST"))
    return rows


def limit_rows(level: int, kind: str, ctx: BoundsContext) -> list[Row]:
    """Station-limit rows of a level, static windows included as rows."""
    if level == 1:
        return []
    rows = window_rows(kind, ctx)
    if level == 2:
        return rows
    strengthened = level == 4
    if isinstance(ctx.spec, Type1):
        rows += _type1_dynamic(kind, strengthened, ctx)
    elif isinstance(ctx.spec, Type2):
        rows += cycle_time_rows(ctx)
        rows += _type2_dynamic(kind, strengthened, ctx)
    return rows


def model_rows(config: FormulationConfig, ctx: BoundsContext) -> list[Row]:
    """Every row of a formulation, before variable elimination."""
    kind = config.variable_kind
    rows = occurrence_rows(kind, ctx) + capacity_rows(kind, ctx)
    if kind == STEP:
        rows += continuity_rows(ctx)
    rows += precedence_rows(config.precedence_family, ctx)
    rows += limit_rows(config.limit_level, kind, ctx)
    return rows


def eliminated(kind: str, level: int, ctx: BoundsContext) -> dict[Key, float]:
    """Variables replaced by constants at a limit level.

    Impulse variables outside a task's window are 0.  Step variables are 0
    before the window and 1 from its last station on; with continuity and
    the 0/1 bounds this is the same region as fixing them at the window ends.
    """
    if level < 2:
        return {}
    fixed: dict[Key, float] = {}
    for i in ctx.instance.tasks:
        E, L = ctx.E[i], ctx.L[i]
        for s in ctx.stations:
            if kind == IMPULSE:
                if not E <= s <= L:
                    fixed[("x", s, i)] = 0
            elif s < E:
                fixed[("xb", s, i)] = 0
            elif s >= L:
                fixed[("xb", s, i)] = 1
    return fixed


def fold(row: Row, fixed: Mapping[Key, float]) -> Row:
    terms = {}
    rhs = row.rhs
    for k, coef in row.terms.items():
        if k in fixed:
            rhs -= coef * fixed[k]
        elif coef != 0:
            terms[k] = coef
    return Row(terms, row.sense, rhs, row.tag)
