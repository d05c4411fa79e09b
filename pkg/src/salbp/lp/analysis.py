"""Decoding solver output and LP-gap bookkeeping."""

from __future__ import annotations

import math

from salbp.bounds import BoundsContext, ProblemSpec, Type1, make_bounds_context
from salbp.errors import SolverError
from salbp.formulations import FormulationConfig, build_model
from salbp.lp.simplex import solve_lp


def triangular(m: int) -> int:
    """Value of the station objective when stations ``1..m`` are used."""
    return m * (m + 1) // 2


def decode_optimum(model, values) -> int:
    """Station count (type 1) or cycle time (type 2) of an integer solution."""
    point = model.point(values)
    ctx = model.ctx
    if isinstance(ctx.spec, Type1):
        return sum(1 for v in point.y.values() if v > 0.5)
    inst = ctx.instance
    loads = []
    for s in ctx.stations:
        load = 0.0
        for i in inst.tasks:
            if point.kind == "impulse":
                share = point.x.get((s, i), 0.0)
            else:
                share = point.x.get((s, i), 0.0) - (point.x.get((s - 1, i), 0.0) if s > 1 else 0.0)
            load += inst.t(i) * share
        loads.append(load)
    return int(round(max(loads)))


def lp_bound(instance, spec: ProblemSpec, config: FormulationConfig, ctx: BoundsContext | None = None) -> float:
    model = build_model(instance, spec, config, ctx)
    sol = solve_lp(model)
    if not sol.optimal:
        raise SolverError(f"LP relaxation of {model.name} ended with status {sol.status.value}")
    return sol.objective


def lp_deviation(
    instance,
    spec: ProblemSpec,
    config: FormulationConfig,
    reference_optimum: float,
    ctx: BoundsContext | None = None,
    space: str = "objective",
) -> float:
    """Relative gap of the LP bound to a known optimum, in percent.

    ``reference_optimum`` is the problem optimum: a station count for type 1,
    a cycle time for type 2.  With ``space="objective"`` the type-1 gap is
    measured on the station objective (``m*(m*+1)/2`` versus the LP value);
    ``space="stations"`` first maps the LP value back to a fractional
    station count.
    """
    if reference_optimum <= 0:
        raise ValueError("reference optimum must be positive")
    ctx = ctx or make_bounds_context(instance, spec)
    bound = lp_bound(instance, spec, config, ctx)
    ref = float(reference_optimum)
    if isinstance(spec, Type1):
        if space == "objective":
            ref = float(triangular(int(reference_optimum)))
        elif space == "stations":
            bound = (math.sqrt(1 + 8 * bound) - 1) / 2
        else:
            raise ValueError(f"unknown deviation space {space!r}")
    return 100.0 * (ref - bound) / ref
