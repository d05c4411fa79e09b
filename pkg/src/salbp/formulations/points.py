"""Fractional points and per-family feasibility checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from salbp.errors import DimensionMismatch

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class FractionalPoint:
    """Values of the assignment variables at a (possibly fractional) point.

    ``x`` maps ``(station, task)`` to a value; missing entries are 0.  For
    ``kind == "step"`` the entries are step variables.
    """

    x: Mapping[tuple[int, int], float]
    y: Mapping[int, float] | None = None
    r: Mapping[int, float] | None = None
    c_val: float | None = None
    kind: str = "impulse"

    def value(self, key) -> float:
        head = key[0]
        if head in ("x", "xb"):
            want = "impulse" if head == "x" else "step"
            if want != self.kind:
                raise DimensionMismatch(f"row uses {want} variables but the point holds {self.kind}")
            if head == "xb" and key[1] == 0:
                return 0
            return self.x.get((key[1], key[2]), 0)
        if head == "y":
            if self.y is None:
                raise DimensionMismatch("row needs station-use values y but the point has none")
            return self.y.get(key[1], 0)
        if head == "r":
            if self.r is None:
                raise DimensionMismatch("row needs cycle-time indicators r but the point has none")
            return self.r.get(key[1], 0)
        if head == "c":
            if self.c_val is None:
                raise DimensionMismatch("row needs a cycle-time value but the point has none")
            return self.c_val
        raise KeyError(key)


@dataclass(frozen=True)
class FamilyVerdict:
    satisfied: bool
    violation: float
    worst_row: int | None
    rows: int


@dataclass(frozen=True)
class FeasibilityReport:
    verdicts: dict[str, FamilyVerdict] = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def __getitem__(self, family: str) -> FamilyVerdict:
        return self.verdicts[family]

    @property
    def satisfied(self) -> bool:
        return all(v.satisfied for v in self.verdicts.values())

    @property
    def violation(self) -> float:
        return max((v.violation for v in self.verdicts.values()), default=0.0)

    def violated_families(self) -> list[str]:
        return [f for f, v in self.verdicts.items() if not v.satisfied]


def evaluate_rows(rows, point: FractionalPoint, tol: float = DEFAULT_TOL) -> FamilyVerdict:
    worst = 0
    worst_row = None
    for k, row in enumerate(rows):
        v = row.violation(point.value)
        if v > worst:
            worst, worst_row = v, k
    ok = worst <= tol
    return FamilyVerdict(ok, float(worst), None if ok else worst_row, len(rows))


def check_point(point, instance, spec, selector, ctx, tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Evaluate inequality families at ``point``.

    ``selector`` is a family name (``"PA"``, ``"RC2"``, ...), a row tag
    (``"occ"``, ``"lim.PF1"``, ...), a :class:`FormulationConfig` (every
    row of that model, grouped by tag), or an iterable of those.
    """
    from salbp.formulations.config import FormulationConfig
    from salbp.formulations.select import rows_for

    if ctx.instance != instance or ctx.spec != spec:
        raise DimensionMismatch("bounds context does not match instance/spec")
    _check_dimensions(point, instance, ctx)
    if isinstance(selector, (str, FormulationConfig)):
        selector = [selector]
    verdicts: dict[str, FamilyVerdict] = {}
    for sel in selector:
        groups = rows_for(sel, point.kind, ctx)
        for name, rows in groups.items():
            verdicts[name] = evaluate_rows(rows, point, tol)
    return FeasibilityReport(verdicts, tol)


def _check_dimensions(point: FractionalPoint, instance, ctx) -> None:
    M = ctx.n_stations
    for s, i in point.x:
        if not (1 <= s <= M and 1 <= i <= instance.n):
            raise DimensionMismatch(f"point entry ({s},{i}) outside {M} stations x {instance.n} tasks")
    if point.y is not None and any(not 1 <= s <= M for s in point.y):
        raise DimensionMismatch("station-use value outside the station range")
    if point.r is not None and any(t not in ctx.cycle_times for t in point.r):
        raise DimensionMismatch("cycle-time indicator outside the admissible cycle times")


def convert_impulse_to_step(
    point: FractionalPoint, S: Iterable[int] | int, tasks: Iterable[int] | None = None
) -> FractionalPoint:
    """Prefix sums over stations; ``y``, ``r`` and ``c_val`` are kept."""
    stations = range(1, S + 1) if isinstance(S, int) else sorted(S)
    if tasks is None:
        tasks = sorted({i for (_, i) in point.x})
    xb = {}
    for i in tasks:
        acc = 0
        for s in stations:
            acc += point.x.get((s, i), 0)
            xb[(s, i)] = acc
    return FractionalPoint(x=xb, y=point.y, r=point.r, c_val=point.c_val, kind="step")
