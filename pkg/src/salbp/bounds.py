"""Station windows, capacity bounds and the bound recipes used to size models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from salbp.errors import BadCycleTime, BadStationCount, InfeasibleWindows
from salbp.instances import Instance


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class Type1:
    """Minimise the number of stations for a given cycle time ``c``."""

    c: int

    def __str__(self):
        return f"type1(c={self.c})"


@dataclass(frozen=True)
class Type2:
    """Minimise the cycle time for a given number of stations ``m``."""

    m: int

    def __str__(self):
        return f"type2(m={self.m})"


ProblemSpec = Union[Type1, Type2]


def _check_c(instance: Instance, c: int) -> None:
    if c < max(instance.times):
        raise BadCycleTime(f"cycle time {c} is below the longest task time {max(instance.times)}")


def earliest_station(instance: Instance, i: int, c: int) -> int:
    _check_c(instance, c)
    return ceil_div(instance.head_time(i), c)


def latest_station(instance: Instance, i: int, c: int, m: int) -> int:
    _check_c(instance, c)
    if m < 1:
        raise BadStationCount(f"station count must be >= 1, got {m}")
    return m + 1 - ceil_div(instance.tail_time(i), c)


def lm1(instance: Instance, c: int) -> int:
    _check_c(instance, c)
    return ceil_div(instance.total_time, c)


def lc1(instance: Instance, m: int) -> int:
    if m < 1:
        raise BadStationCount(f"station count must be >= 1, got {m}")
    return max(max(instance.times), ceil_div(instance.total_time, m))


@dataclass(frozen=True)
class BoundsContext:
    """Everything a formulation needs to size its station and cycle-time sets.

    ``E``/``L`` are indexed by task number (index 0 unused).  For type 1
    ``c_lower == c_upper == c``; for type 2 ``m_lower == m_upper == m``.
    """

    instance: Instance
    spec: ProblemSpec
    m_lower: int
    m_upper: int
    c_lower: int
    c_upper: int
    E: tuple[int, ...]
    L: tuple[int, ...]

    @property
    def stations(self) -> range:
        """The station set ``S`` of the model."""
        return range(1, self.m_upper + 1)

    @property
    def n_stations(self) -> int:
        return self.m_upper

    @property
    def cycle_times(self) -> range:
        """Admissible integer cycle times ``C`` (a single value for type 1)."""
        return range(self.c_lower, self.c_upper + 1)

    def window(self, i: int) -> range:
        return range(self.E[i], self.L[i] + 1)

    def width(self, i: int) -> int:
        return self.L[i] - self.E[i] + 1

    # station limits that depend on a trial cycle time or station count
    def earliest(self, i: int, c: int) -> int:
        return ceil_div(self.instance.head_time(i), c)

    def latest(self, i: int, c: int, m: int) -> int:
        return m + 1 - ceil_div(self.instance.tail_time(i), c)


def make_bounds_context(instance: Instance, spec: ProblemSpec) -> BoundsContext:
    if isinstance(spec, Type1):
        c = spec.c
        m_lo = lm1(instance, c)
        m_hi = min(2 * m_lo, instance.n)
        c_lo = c_hi = c
        E = [0] + [earliest_station(instance, i, c) for i in instance.tasks]
        L = [0] + [latest_station(instance, i, c, m_hi) for i in instance.tasks]
    elif isinstance(spec, Type2):
        m = spec.m
        c_lo = lc1(instance, m)
        c_hi = 2 * c_lo
        m_lo = m_hi = m
        E = [0] + [earliest_station(instance, i, c_hi) for i in instance.tasks]
        L = [0] + [latest_station(instance, i, c_hi, m) for i in instance.tasks]
    else:
        raise TypeError(f"unknown problem spec {spec!r}")
    bad = [i for i in instance.tasks if E[i] > L[i]]
    if bad:
        raise InfeasibleWindows(
            f"empty station window for task(s) {bad}: "
            + ", ".join(f"E={E[i]} > L={L[i]}" for i in bad[:3])
        )
    return BoundsContext(instance, spec, m_lo, m_hi, c_lo, c_hi, tuple(E), tuple(L))


def window_table(ctx: BoundsContext) -> str:
    rows = ["task\tE\tL\twidth"]
    for i in ctx.instance.tasks:
        rows.append(f"{i}\t{ctx.E[i]}\t{ctx.L[i]}\t{ctx.width(i)}")
    return "\n".join(rows) + "\n"
