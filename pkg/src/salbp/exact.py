"""Exact optima for small instances, independent of the LP machinery.

The station-count search runs over order ideals (downward-closed task sets):
the tasks placed on the first ``k`` stations always form an ideal, and each
station may be assumed to carry a maximal load (no further available task
fits), so layer ``k`` of a breadth-first search holds every ideal reachable
with ``k`` maximally loaded stations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from salbp.bounds import lc1, lm1
from salbp.errors import BadCycleTime, TooLarge
from salbp.instances import Instance

MAX_TASKS_DP = 22
MAX_TASKS_ENUM = 10


@dataclass(frozen=True)
class Assignment:
    station_of: tuple[int, ...]
    loads: tuple[int, ...]

    @property
    def m_used(self) -> int:
        return sum(1 for load in self.loads if load > 0)

    @property
    def n_stations(self) -> int:
        return len(self.loads)

    @property
    def cycle_time(self) -> int:
        return max(self.loads)

    def station(self, i: int) -> int:
        return self.station_of[i - 1]

    def pairs(self) -> str:
        return " ".join(f"{i}:{s}" for i, s in enumerate(self.station_of, start=1))


def make_assignment(instance: Instance, station_of) -> Assignment:
    station_of = tuple(station_of)
    loads = [0] * max(station_of)
    for i, s in enumerate(station_of, start=1):
        loads[s - 1] += instance.t(i)
    return Assignment(station_of, tuple(loads))


def is_feasible(instance: Instance, assignment: Assignment, c: int | None = None, m: int | None = None) -> bool:
    if any(assignment.station(i) > assignment.station(j) for i, j in instance.arcs):
        return False
    if c is not None and assignment.cycle_time > c:
        return False
    if m is not None and assignment.n_stations > m:
        return False
    return True


def _maximal_loads(inst: Instance, done: int, c: int) -> Iterator[tuple[int, int]]:
    """All maximal station loads on top of ideal ``done`` as (mask, time) pairs."""
    n = inst.n
    times = inst.times
    pred = inst.pred_mask
    full = (1 << n) - 1

    def available(assigned: int, skip: int) -> list[int]:
        out = []
        for b in range(n):
            bit = 1 << b
            if not (assigned | skip) & bit and pred[b + 1] & ~assigned == 0:
                out.append(b)
        return out

    def rec(load: int, used: int, excluded: int):
        assigned = done | load
        cand = available(assigned, excluded)
        cand = [b for b in cand if times[b] <= c - used]
        if not cand:
            # maximal unless an excluded task that is available still fits
            for b in range(n):
                bit = 1 << b
                if excluded & bit and not assigned & bit and pred[b + 1] & ~assigned == 0:
                    if times[b] <= c - used:
                        return
            if load:
                yield load, used
            return
        b = cand[0]
        yield from rec(load | (1 << b), used + times[b], excluded)
        yield from rec(load, used, excluded | (1 << b))

    if done == full:
        return
    yield from rec(0, 0, 0)


def salbp1_opt(instance: Instance, c: int) -> tuple[int, Assignment]:
    """Minimum station count for cycle time ``c`` and one optimal assignment."""
    n = instance.n
    if n > MAX_TASKS_DP:
        raise TooLarge(f"{n} tasks exceed the exact-search limit of {MAX_TASKS_DP}")
    if c < max(instance.times):
        raise BadCycleTime(f"cycle time {c} is below the longest task time")
    full = (1 << n) - 1
    parent: dict[int, tuple[int, int]] = {0: (-1, 0)}
    layer = [0]
    k = 0
    while full not in parent:
        k += 1
        nxt = []
        for ideal in layer:
            for load, _ in _maximal_loads(instance, ideal, c):
                new = ideal | load
                if new not in parent:
                    parent[new] = (ideal, load)
                    nxt.append(new)
        layer = nxt
    station_of = [0] * n
    node = full
    s = k
    while node:
        prev, load = parent[node]
        for b in range(n):
            if load >> b & 1:
                station_of[b] = s
        node = prev
        s -= 1
    return k, make_assignment(instance, station_of)


def salbp2_opt(instance: Instance, m: int) -> tuple[int, Assignment]:
    """Minimum integer cycle time for ``m`` stations and one optimal assignment."""
    if instance.n > MAX_TASKS_DP:
        raise TooLarge(f"{instance.n} tasks exceed the exact-search limit of {MAX_TASKS_DP}")
    lo = lc1(instance, m)
    hi = instance.total_time
    best = salbp1_opt(instance, hi)[1]
    while lo < hi:
        mid = (lo + hi) // 2
        k, a = salbp1_opt(instance, mid)
        if k <= m:
            hi, best = mid, a
        else:
            lo = mid + 1
    if best.cycle_time > lo:
        best = salbp1_opt(instance, lo)[1]
    return lo, best


def enumerate_assignments(instance: Instance, c: int, m_max: int) -> Iterator[Assignment]:
    """Every precedence- and capacity-feasible map of tasks to stations ``1..m_max``.

    Empty stations in between are allowed; each map is yielded once.
    """
    n = instance.n
    if n > MAX_TASKS_ENUM:
        raise TooLarge(f"{n} tasks exceed the enumeration limit of {MAX_TASKS_ENUM}")
    if m_max < 1 or lm1(instance, c) > m_max:
        return
    order = instance.topological_order()
    preds_of = {j: [i for i, jj in instance.arcs if jj == j] for j in instance.tasks}
    station = [0] * (n + 1)
    loads = [0] * (m_max + 1)

    def rec(k: int):
        if k == n:
            yield make_assignment(instance, station[1:])
            return
        j = order[k]
        lo = max((station[i] for i in preds_of[j]), default=1)
        for s in range(lo, m_max + 1):
            if loads[s] + instance.t(j) <= c:
                station[j] = s
                loads[s] += instance.t(j)
                yield from rec(k + 1)
                loads[s] -= instance.t(j)
        station[j] = 0

    yield from rec(0)


def brute_force_salbp1(instance: Instance, c: int) -> int:
    """Station minimum by exhaustive search over all maps; tiny instances only."""
    n = instance.n
    if n > 8:
        raise TooLarge("brute force is limited to 8 tasks")
    best = n
    for stations in product(range(1, n + 1), repeat=n):
        a = make_assignment(instance, stations)
        if is_feasible(instance, a, c=c):
            best = min(best, len(set(stations)))
    return best
