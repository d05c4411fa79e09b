"""Assembly of formulation variants into explicit linear models."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from salbp.bounds import BoundsContext, ProblemSpec, Type1, Type2, make_bounds_context
from salbp.errors import IncompatibleConfig
from salbp.formulations.config import IMPULSE, STEP, FormulationConfig
from salbp.formulations.points import FractionalPoint
from salbp.formulations.rows import (
    EQ,
    GE,
    LE,
    Key,
    Row,
    eliminated,
    fold,
    limit_rows,
    model_rows,
    precedence_rows,
)
from salbp.instances import Instance


@dataclass(frozen=True)
class Variable:
    name: str
    lb: float
    ub: float
    binary: bool


@dataclass(frozen=True)
class Constraint:
    coefs: tuple[tuple[int, float], ...]
    sense: str
    rhs: float
    tag: str


@dataclass(frozen=True)
class LinearModel:
    """A minimisation model; ``keys[j]`` is the symbolic key of column ``j``."""

    name: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[tuple[int, float], ...]
    keys: tuple[Key, ...]
    fixed: Mapping[Key, float] = field(default_factory=dict)
    ctx: BoundsContext | None = None
    config: FormulationConfig | None = None
    objective_integral: bool = False

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_rows(self) -> int:
        return len(self.constraints)

    def index(self, key: Key) -> int:
        return self._index[key]

    @property
    def _index(self) -> dict[Key, int]:
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = {k: j for j, k in enumerate(self.keys)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def objective_value(self, values: Sequence[float]) -> float:
        return sum(coef * values[j] for j, coef in self.objective)

    def point(self, values: Sequence[float]) -> FractionalPoint:
        """Full-grid point from column values; eliminated entries filled in."""
        x: dict = {}
        y: dict | None = None
        r: dict | None = None
        c_val = None
        kind = self.config.variable_kind if self.config else IMPULSE
        entries = list(zip(self.keys, values)) + list(self.fixed.items())
        for key, v in entries:
            v = float(v)
            if key[0] in ("x", "xb"):
                x[(key[1], key[2])] = v
            elif key[0] == "y":
                y = {} if y is None else y
                y[key[1]] = v
            elif key[0] == "r":
                r = {} if r is None else r
                r[key[1]] = v
            elif key[0] == "c":
                c_val = v
        return FractionalPoint(x=x, y=y, r=r, c_val=c_val, kind=kind)


def _name(key: Key) -> str:
    return "_".join(str(p) for p in key)


def _column_keys(config: FormulationConfig, ctx: BoundsContext, fixed) -> list[Key]:
    var = "x" if config.variable_kind == IMPULSE else "xb"
    keys = [(var, s, i) for i in ctx.instance.tasks for s in ctx.stations]
    keys = [k for k in keys if k not in fixed]
    if isinstance(ctx.spec, Type1):
        keys += [("y", s) for s in ctx.stations]
    else:
        keys.append(("c",))
        if config.limit_level >= 3:
            keys += [("r", t) for t in ctx.cycle_times]
    return keys


def _bounds(key: Key, ctx: BoundsContext) -> tuple[float, float, bool]:
    if key[0] == "c":
        return float(ctx.c_lower), float(ctx.c_upper), False
    return 0.0, 1.0, True


def _redundant(row: Row, bounds: Mapping[Key, tuple[float, float, bool]]) -> bool:
    """True when the row holds for every point inside the variable bounds."""
    if not row.terms:
        if row.sense == LE:
            return 0 <= row.rhs + 1e-12
        if row.sense == GE:
            return 0 >= row.rhs - 1e-12
        return abs(row.rhs) <= 1e-12
    if row.sense == EQ:
        return False
    hi = lo = 0.0
    for k, coef in row.terms.items():
        lb, ub, _ = bounds[k]
        hi += coef * (ub if coef > 0 else lb)
        lo += coef * (lb if coef > 0 else ub)
    if row.sense == LE:
        return hi <= row.rhs + 1e-12
    return lo >= row.rhs - 1e-12


def _check_compatible(spec: ProblemSpec, config: FormulationConfig, ctx: BoundsContext) -> None:
    if ctx.spec != spec:
        raise IncompatibleConfig(f"bounds context was built for {ctx.spec}, not {spec}")
    if not isinstance(config, FormulationConfig):
        raise IncompatibleConfig(f"not a formulation config: {config!r}")


def build_model(
    instance: Instance,
    spec: ProblemSpec,
    config: FormulationConfig,
    ctx: BoundsContext | None = None,
) -> LinearModel:
    if ctx is None:
        ctx = make_bounds_context(instance, spec)
    _check_compatible(spec, config, ctx)
    fixed = eliminated(config.variable_kind, config.limit_level, ctx)
    keys = _column_keys(config, ctx, fixed)
    index = {k: j for j, k in enumerate(keys)}
    bounds = {k: _bounds(k, ctx) for k in keys}
    variables = tuple(Variable(_name(k), *bounds[k]) for k in keys)

    constraints = []
    for row in model_rows(config, ctx):
        row = fold(row, fixed)
        if _redundant(row, bounds):
            continue
        coefs = tuple(sorted((index[k], float(v)) for k, v in row.terms.items()))
        constraints.append(Constraint(coefs, row.sense, float(row.rhs), row.tag))

    if isinstance(spec, Type1):
        objective = tuple((index[("y", s)], float(s)) for s in ctx.stations)
    else:
        objective = ((index[("c",)], 1.0),)
    label = f"{instance.name or 'instance'}:{spec}:{config.label}"
    return LinearModel(
        name=label,
        variables=variables,
        constraints=tuple(constraints),
        objective=objective,
        keys=tuple(keys),
        fixed=fixed,
        ctx=ctx,
        config=config,
        objective_integral=True,
    )


def emit_precedence(
    family: str, instance: Instance, ctx: BoundsContext, level: int = 1
) -> list[Row]:
    """Precedence rows of one family after eliminating out-of-window variables."""
    kind = STEP if family == "SC" else IMPULSE
    if ctx.instance != instance:
        raise IncompatibleConfig("bounds context belongs to another instance")
    fixed = eliminated(kind, level, ctx)
    rows = [fold(r, fixed) for r in precedence_rows(family, ctx)]
    return [r for r in rows if not _redundant(r, _row_bounds(r, ctx))]


def emit_station_limits(
    level: int, spec: ProblemSpec, ctx: BoundsContext, kind: str = IMPULSE
) -> tuple[list[Row], dict[Key, float]]:
    """Rows added by a limit level and the variable fixings it implies."""
    if ctx.spec != spec:
        raise IncompatibleConfig(f"bounds context was built for {ctx.spec}, not {spec}")
    fixed = eliminated(kind, level, ctx)
    rows = [fold(r, fixed) for r in limit_rows(level, kind, ctx)]
    rows = [r for r in rows if not _redundant(r, _row_bounds(r, ctx))]
    return rows, fixed


def _row_bounds(row: Row, ctx: BoundsContext) -> dict[Key, tuple[float, float, bool]]:
    return {k: _bounds(k, ctx) for k in row.terms}


@dataclass(frozen=True)
class ModelStats:
    variables: int
    binaries: int
    constraints: int
    nonzeros: int
    by_tag: dict[str, int]

    def __str__(self):
        lines = [
            f"variables\t{self.variables}",
            f"binaries\t{self.binaries}",
            f"constraints\t{self.constraints}",
            f"nonzeros\t{self.nonzeros}",
        ]
        lines += [f"{tag}\t{cnt}" for tag, cnt in sorted(self.by_tag.items())]
        return "\n".join(lines)


def model_stats(model: LinearModel) -> ModelStats:
    tags = Counter(c.tag for c in model.constraints)
    return ModelStats(
        variables=model.n_vars,
        binaries=sum(v.binary for v in model.variables),
        constraints=model.n_rows,
        nonzeros=sum(len(c.coefs) for c in model.constraints),
        by_tag=dict(tags),
    )
