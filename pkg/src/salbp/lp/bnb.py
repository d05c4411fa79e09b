"""Depth-first branch-and-bound over the binary columns of a model."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass

import numpy as np

from salbp.lp.simplex import INT_TOL, Status, tableau_for


class MipStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    NODE_LIMIT = "NodeLimit"


@dataclass(frozen=True)
class MipResult:
    status: MipStatus
    objective: float | None
    bound: float
    values: np.ndarray | None
    nodes: int
    root_bound: float | None = None

    @property
    def optimal(self) -> bool:
        return self.status == MipStatus.OPTIMAL


def solve_bnb(model, node_limit: int = 1_000_000, gap: float = 1e-6, time_limit: float | None = None) -> MipResult:
    """Branch on the most fractional binary (lowest index on ties), 1-branch first.

    When ``model.objective_integral`` is set every subproblem optimum is an
    integer, so a node is pruned once its bound rounds up to the incumbent.
    """
    if node_limit < 1:
        raise ValueError("node_limit must be >= 1")
    start = time.monotonic()
    binaries = np.array([j for j, v in enumerate(model.variables) if v.binary], dtype=int)
    integral = bool(getattr(model, "objective_integral", False))

    def can_improve(bound: float, incumbent: float) -> bool:
        if incumbent == math.inf:
            return True
        if integral:
            return bound <= incumbent - 1 + gap
        return bound < incumbent - gap

    root = tableau_for(model)
    st = root.solve()
    nodes = 1
    if st == Status.INFEASIBLE:
        return MipResult(MipStatus.INFEASIBLE, None, math.inf, None, nodes)
    if st != Status.OPTIMAL:
        return MipResult(MipStatus.NODE_LIMIT, None, -math.inf, None, nodes)
    root_bound = root.objective

    best_obj = math.inf
    best_x = None
    # stack entries: (tableau, bound of parent, (column, value) or None, may_reuse)
    stack = [(root, root_bound, None, True)]
    stopped = False
    open_bounds: list[float] = []
    while stack:
        tab, parent_bound, branch, reuse = stack.pop()
        if not can_improve(parent_bound, best_obj):
            continue
        if branch is not None:
            if nodes >= node_limit or (time_limit is not None and time.monotonic() - start > time_limit):
                stopped = True
                open_bounds.append(parent_bound)
                open_bounds.extend(b for _, b, _, _ in stack)
                break
            if not reuse:
                tab = tab.copy()
            j, v = branch
            tab.set_bounds(j, v, v)
            st = tab.reoptimize()
            nodes += 1
            if st != Status.OPTIMAL:
                continue
        obj = tab.objective
        if not can_improve(obj, best_obj):
            continue
        x = tab.x[binaries]
        frac = np.abs(x - np.round(x))
        k = int(np.argmax(frac)) if frac.size else 0
        if frac.size == 0 or frac[k] <= INT_TOL:
            best_obj = obj
            best_x = tab.values()
            continue
        j = int(binaries[k])
        stack.append((tab, obj, (j, 0.0), True))
        stack.append((tab, obj, (j, 1.0), False))

    if best_x is None:
        if stopped:
            return MipResult(MipStatus.NODE_LIMIT, None, min(open_bounds, default=root_bound), None, nodes, root_bound)
        return MipResult(MipStatus.INFEASIBLE, None, math.inf, None, nodes, root_bound)
    objective = float(model.objective_value(best_x))
    if stopped:
        bound = min([objective] + [b for b in open_bounds if can_improve(b, best_obj)])
        by_time = time_limit is not None and time.monotonic() - start > time_limit
        status = MipStatus.FEASIBLE if by_time else MipStatus.NODE_LIMIT
        return MipResult(status, objective, bound, best_x, nodes, root_bound)
    return MipResult(MipStatus.OPTIMAL, objective, objective, best_x, nodes, root_bound)
