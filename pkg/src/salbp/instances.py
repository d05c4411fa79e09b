"""Task sets with precedence relations: representation, parsing, generation.

Tasks are numbered ``1..n``.  ``arcs`` holds the immediate-precedence pairs
``(i, j)`` (task ``i`` directly precedes ``j``); ``closure`` is the strict
partial order they generate.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable

from salbp.errors import (
    BadArc,
    BadParameters,
    BadTaskTime,
    CycleDetected,
    MalformedHeader,
    MissingSentinel,
)

Arc = tuple[int, int]


def _topological_order(arcs: Iterable[Arc], n: int) -> list[int]:
    ts: TopologicalSorter = TopologicalSorter({i: () for i in range(1, n + 1)})
    for i, j in arcs:
        ts.add(j, i)
    try:
        return list(ts.static_order())
    except CycleError as exc:
        raise CycleDetected(f"precedence relation contains a cycle: {exc.args[1]}") from None


def _descendant_masks(arcs: Iterable[Arc], n: int) -> list[int]:
    """Bit ``j-1`` of entry ``i`` is set iff ``j`` is reachable from ``i``."""
    arcs = list(arcs)
    order = _topological_order(arcs, n)
    succ: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for i, j in arcs:
        succ[i].append(j)
    desc = [0] * (n + 1)
    for i in reversed(order):
        m = 0
        for j in succ[i]:
            m |= (1 << (j - 1)) | desc[j]
        desc[i] = m
    return desc


def transitive_closure(arcs: Iterable[Arc], n: int) -> frozenset[Arc]:
    """All pairs ``(i, j)``, ``i != j``, joined by a directed path."""
    desc = _descendant_masks(arcs, n)
    return frozenset(
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if desc[i] >> (j - 1) & 1
    )


def transitive_reduction(arcs: Iterable[Arc], n: int) -> frozenset[Arc]:
    """Drop every arc implied by a longer path."""
    arcs = set(arcs)
    desc = _descendant_masks(arcs, n)
    keep = set()
    for i, j in arcs:
        implied = any(desc[k] >> (j - 1) & 1 for (a, k) in arcs if a == i and k != j)
        if not implied:
            keep.add((i, j))
    return frozenset(keep)


@dataclass(frozen=True)
class Instance:
    times: tuple[int, ...]
    arcs: frozenset[Arc]
    name: str = ""
    closure: frozenset[Arc] = field(init=False, compare=False, repr=False)
    pred_mask: tuple[int, ...] = field(init=False, compare=False, repr=False)
    succ_mask: tuple[int, ...] = field(init=False, compare=False, repr=False)
    _head: tuple[int, ...] = field(init=False, compare=False, repr=False)
    _tail: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        object.__setattr__(self, "times", times)
        n = len(times)
        if n < 1:
            raise MalformedHeader("an instance needs at least one task")
        for k, t in enumerate(times, start=1):
            if t < 1:
                raise BadTaskTime(f"task {k} has time {t}; times must be >= 1")
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        for i, j in arcs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise BadArc(f"arc ({i},{j}) references a task outside 1..{n}")
            if i == j:
                raise BadArc(f"self-loop on task {i}")
        object.__setattr__(self, "arcs", arcs)

        desc = _descendant_masks(arcs, n)
        anc = [0] * (n + 1)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if desc[i] >> (j - 1) & 1:
                    anc[j] |= 1 << (i - 1)
        closure = frozenset(
            (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if desc[i] >> (j - 1) & 1
        )
        object.__setattr__(self, "closure", closure)
        object.__setattr__(self, "pred_mask", tuple(anc))
        object.__setattr__(self, "succ_mask", tuple(desc))

        def masked_sum(mask: int) -> int:
            return sum(times[j] for j in range(n) if mask >> j & 1)

        head = [0] + [times[i - 1] + masked_sum(anc[i]) for i in range(1, n + 1)]
        tail = [0] + [times[i - 1] + masked_sum(desc[i]) for i in range(1, n + 1)]
        object.__setattr__(self, "_head", tuple(head))
        object.__setattr__(self, "_tail", tuple(tail))

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def tasks(self) -> range:
        return range(1, self.n + 1)

    def t(self, i: int) -> int:
        return self.times[i - 1]

    def predecessors(self, i: int) -> list[int]:
        """All tasks ``j`` with ``j < i`` in the partial order."""
        return [j for j in self.tasks if self.pred_mask[i] >> (j - 1) & 1]

    def successors(self, i: int) -> list[int]:
        return [j for j in self.tasks if self.succ_mask[i] >> (j - 1) & 1]

    def head_time(self, i: int) -> int:
        """Time of ``i`` plus all of its predecessors."""
        return self._head[i]

    def tail_time(self, i: int) -> int:
        """Time of ``i`` plus all of its successors."""
        return self._tail[i]

    def topological_order(self) -> list[int]:
        return _topological_order(sorted(self.arcs), self.n)

    @property
    def total_time(self) -> int:
        return sum(self.times)


def order_strength(instance: Instance) -> int:
    """Number of comparable ordered pairs (raw count, not normalised)."""
    return len(instance.closure)


# -- .alb import ------------------------------------------------------------

_INT = re.compile(r"^[+-]?\d+$")


def _ints(tokens: list[str], exc: type[Exception], what: str) -> list[int]:
    out = []
    for tok in tokens:
        if not _INT.match(tok):
            raise exc(f"expected an integer in {what}, got {tok!r}")
        out.append(int(tok))
    return out


def _parse_arc(line: str) -> Arc:
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != 2 or not all(_INT.match(p) for p in parts):
        raise BadArc(f"cannot read precedence pair {line!r}")
    return int(parts[0]), int(parts[1])


def _build(n: int, time_tokens: list[int], arcs: list[Arc], name: str) -> Instance:
    if len(time_tokens) == n:
        times = time_tokens
    elif len(time_tokens) == 2 * n and time_tokens[0::2] == list(range(1, n + 1)):
        times = time_tokens[1::2]
    else:
        raise BadTaskTime(f"expected {n} task times, found {len(time_tokens)} values")
    for i, j in arcs:
        if not (1 <= i <= n and 1 <= j <= n):
            raise BadArc(f"arc ({i},{j}) references a task outside 1..{n}")
    return Instance(times=tuple(times), arcs=frozenset(arcs), name=name)


def _parse_tagged(text: str, name: str) -> Instance:
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("<") and line.endswith(">"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
        elif current is not None:
            sections[current].append(line)
    if "end" not in sections:
        raise MissingSentinel("tagged file lacks the <end> marker")
    head = sections.get("number of tasks", [])
    if len(head) != 1 or not _INT.match(head[0]) or int(head[0]) < 1:
        raise MalformedHeader("missing or invalid <number of tasks>")
    n = int(head[0])
    tokens = " ".join(sections.get("task times", [])).split()
    times = _ints(tokens, BadTaskTime, "task times")
    arcs = [_parse_arc(line) for line in sections.get("precedence relations", [])]
    return _build(n, times, arcs, name)


def parse_alb(text: str, name: str = "") -> Instance:
    """Read a benchmark file.

    The classic layout is the task count, then one time per task (either a
    bare integer or an ``index time`` pair), then ``a,b`` precedence pairs
    closed by ``-1,-1``.  Files using the bracketed ``<section>`` layout are
    accepted as well.
    """
    if "<number of tasks>" in text.lower():
        return _parse_tagged(text, name)

    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if not _INT.match(head[0]) or int(head[0]) < 1:
        raise MalformedHeader(f"task count must be a positive integer, got {head[0]!r}")
    n = int(head[0])
    time_tokens: list[str] = head[1:]
    k = 1
    while k < len(lines) and "," not in lines[k]:
        time_tokens.extend(lines[k].split())
        k += 1
    times = _ints(time_tokens, BadTaskTime, "task times")

    arcs: list[Arc] = []
    for line in lines[k:]:
        pair = _parse_arc(line)
        if pair == (-1, -1):
            return _build(n, times, arcs, name)
        arcs.append(pair)
    raise MissingSentinel("precedence list not terminated by -1,-1")


def alb_metadata(text: str) -> dict[str, int]:
    """Cycle time or station count stored in a bracketed benchmark file, if any."""
    out: dict[str, int] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("<") and line.endswith(">"):
            current = line[1:-1].strip().lower()
        elif line and current in ("cycle time", "number of stations") and _INT.match(line):
            out["c" if current == "cycle time" else "m"] = int(line)
    return out


def format_alb(instance: Instance) -> str:
    lines = [str(instance.n)]
    lines += [str(t) for t in instance.times]
    lines += [f"{i},{j}" for i, j in sorted(instance.arcs)]
    lines.append("-1,-1")
    return "\n".join(lines) + "\n"


# -- canonical document -----------------------------------------------------


def to_document(instance: Instance) -> dict:
    return {
        "name": instance.name,
        "n": instance.n,
        "times": list(instance.times),
        "arcs": [[i, j] for i, j in sorted(instance.arcs)],
    }


def from_document(doc: dict) -> Instance:
    try:
        n = int(doc["n"])
        times = [int(t) for t in doc["times"]]
        arcs = [(int(a), int(b)) for a, b in doc["arcs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHeader(f"invalid instance document: {exc}") from None
    if n < 1:
        raise MalformedHeader("n must be positive")
    if len(times) != n:
        raise BadTaskTime(f"document declares n={n} but lists {len(times)} times")
    return Instance(times=tuple(times), arcs=frozenset(arcs), name=str(doc.get("name", "")))


def dumps(instance: Instance) -> str:
    return json.dumps(to_document(instance), indent=2) + "\n"


def loads(text: str) -> Instance:
    return from_document(json.loads(text))


def read_instance(path) -> Instance:
    """Load ``.json`` documents or benchmark files, picked by extension."""
    from pathlib import Path

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        inst = loads(text)
        if not inst.name:
            inst = Instance(inst.times, inst.arcs, name=path.stem)
        return inst
    return parse_alb(text, name=path.stem)


# -- generation -------------------------------------------------------------


def random_instance(
    seed: int,
    n: int,
    arc_density: float,
    time_range: tuple[int, int] = (1, 10),
    name: str | None = None,
) -> Instance:
    """Random task set; arcs only go forward in a shuffled labelling.

    Each forward pair becomes an arc with probability ``arc_density``; the
    result is reduced to its immediate-precedence (Hasse) arcs.
    """
    if n < 1:
        raise BadParameters("n must be >= 1")
    if not 0.0 <= arc_density <= 1.0:
        raise BadParameters("arc_density must lie in [0, 1]")
    lo, hi = time_range
    if lo < 1 or hi < lo:
        raise BadParameters(f"invalid time range {time_range!r}")
    rng = random.Random(seed)
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    times = tuple(rng.randint(lo, hi) for _ in range(n))
    arcs = set()
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < arc_density:
                arcs.add((labels[a], labels[b]))
    arcs = transitive_reduction(arcs, n)
    if name is None:
        name = f"rand-s{seed}-n{n}-d{arc_density:g}"
    return Instance(times=times, arcs=arcs, name=name)
