"""Mechanical checks of the dominance relations between precedence families.

All checks run on occurrence-feasible fractional points (every task's
values sum to one over the stations).  Sampled values are dyadic
rationals, so the row activities are computed exactly in floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from salbp.bounds import Type2, make_bounds_context
from salbp.formulations import FractionalPoint, check_point
from salbp.formulations.rows import EQ, GE, precedence_rows
from salbp.instances import Instance

FAMILIES = ("PA", "BW", "TS", "RC1", "RC2")
TOL = 1e-9
DENOMINATORS = (4, 8, 16, 32, 64)


class Relation(str, enum.Enum):
    IMPLIES = "implies"
    IMPLIED_BY = "implied-by"
    DOMINATES = "strictly-dominates"
    DOMINATED_BY = "dominated-by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


_MIRROR = {
    Relation.IMPLIES: Relation.IMPLIED_BY,
    Relation.IMPLIED_BY: Relation.IMPLIES,
    Relation.DOMINATES: Relation.DOMINATED_BY,
    Relation.DOMINATED_BY: Relation.DOMINATES,
    Relation.EQUIVALENT: Relation.EQUIVALENT,
    Relation.INCOMPARABLE: Relation.INCOMPARABLE,
}


def _reference() -> dict[tuple[str, str], Relation]:
    ref = {}

    def put(a, b, rel):
        ref[(a, b)] = rel
        ref[(b, a)] = _MIRROR[rel]

    for f in ("PA", "TS", "BW", "RC1"):
        put("RC2", f, Relation.DOMINATES)
    put("BW", "RC1", Relation.DOMINATES)
    put("PA", "TS", Relation.EQUIVALENT)
    # TS has no edges of its own; they are inherited through TS == PA
    for f in ("PA", "TS"):
        put(f, "BW", Relation.INCOMPARABLE)
        put(f, "RC1", Relation.INCOMPARABLE)
    for f in FAMILIES:
        ref[(f, f)] = Relation.EQUIVALENT
    return ref


REFERENCE = _reference()


# -- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    label: str
    instance: Instance
    m: int
    point: FractionalPoint
    expected: dict[str, bool]  # family -> satisfied
    note: str = ""

    @property
    def spec(self) -> Type2:
        return Type2(self.m)

    def verdicts(self, tol: float = TOL) -> dict[str, bool]:
        ctx = make_bounds_context(self.instance, self.spec)
        report = check_point(self.point, self.instance, self.spec, list(self.expected), ctx, tol)
        return {f: report[f].satisfied for f in self.expected}


def _pair() -> Instance:
    return Instance((1, 1), ((1, 2),), "pair")


def builtin_counterexamples() -> list[Counterexample]:
    """Hand-built points separating the families on one arc ``1 -> 2``, m = 3."""
    h = 0.5
    dom1 = FractionalPoint({(1, 1): h, (2, 1): h, (1, 2): 0.75, (3, 2): 0.25})
    dom2 = FractionalPoint({(1, 1): h, (3, 1): h, (1, 2): h, (2, 2): h})
    bw_rc1 = FractionalPoint({(2, 1): h, (3, 1): h, (1, 2): h, (3, 2): h})
    yes, no = True, False
    return [
        Counterexample(
            "dom1", _pair(), 3, dom1,
            {"PA": yes, "TS": yes, "BW": no, "RC1": no, "RC2": no},
            "mean stations agree, but the successor starts before the predecessor",
        ),
        Counterexample(
            "dom2", _pair(), 3, dom2,
            {"PA": no, "TS": no, "BW": yes, "RC1": yes, "RC2": no},
            "successor never outruns the predecessor's cumulative mass, mean station inverted",
        ),
        Counterexample(
            "bw-rc1", _pair(), 3, bw_rc1,
            {"PA": no, "TS": no, "BW": no, "RC1": yes, "RC2": no},
            "pairwise conflicts all sum to one, cumulative bound broken at station 1",
        ),
    ]  # fmt: skip


def registry_fidelity(tol: float = TOL) -> dict[str, dict[str, tuple[bool, bool]]]:
    """Per counterexample: family -> (expected, observed), mismatches only."""
    out = {}
    for cx in builtin_counterexamples():
        got = cx.verdicts(tol)
        bad = {f: (cx.expected[f], got[f]) for f in cx.expected if cx.expected[f] != got[f]}
        if bad:
            out[cx.label] = bad
    return out


# -- vectorized row evaluation -------------------------------------------------


@dataclass(frozen=True)
class Shape:
    n: int
    m: int
    arcs: tuple[tuple[int, int], ...]

    @property
    def instance(self) -> Instance:
        return Instance((1,) * self.n, self.arcs, f"shape{self.n}x{self.m}")

    def __str__(self):
        arcs = ",".join(f"{i}<{j}" for i, j in self.arcs)
        return f"{self.n}x{self.m}[{arcs}]"


def make_shape(shape) -> Shape:
    if isinstance(shape, Shape):
        return shape
    n, m, *rest = shape
    arcs = tuple(rest[0]) if rest else tuple((i, i + 1) for i in range(1, n))
    return Shape(int(n), int(m), tuple(tuple(a) for a in arcs))


def default_shapes() -> list[Shape]:
    """Transitively reduced DAGs on 2-4 tasks (one per arc pattern) with m in 3..5."""
    patterns = [
        (2, ((1, 2),)),
        (3, ((1, 2), (2, 3))),
        (3, ((1, 2), (1, 3))),
        (3, ((1, 3), (2, 3))),
        (3, ((1, 2),)),
        (4, ((1, 2), (2, 3), (3, 4))),
        (4, ((1, 2), (1, 3), (2, 4), (3, 4))),
        (4, ((1, 2), (1, 3), (1, 4))),
        (4, ((1, 4), (2, 4), (3, 4))),
        (4, ((1, 3), (2, 3), (2, 4))),
        (4, ((1, 2), (3, 4))),
    ]
    return [Shape(n, m, arcs) for n, arcs in patterns for m in (3, 4, 5)]


class _Compiled:
    """Dense row matrices of each family over the impulse grid of one shape."""

    def __init__(self, shape: Shape, families=FAMILIES):
        self.shape = shape
        inst = shape.instance
        ctx = make_bounds_context(inst, Type2(shape.m))
        self.ctx = ctx
        n, m = shape.n, shape.m
        self.mats = {}
        for fam in families:
            rows = precedence_rows(fam, ctx)
            A = np.zeros((len(rows), n * m))
            b = np.zeros(len(rows))
            sign = np.ones(len(rows))
            eq = np.zeros(len(rows), dtype=bool)
            for k, row in enumerate(rows):
                for (_, s, i), coef in row.terms.items():
                    A[k, (i - 1) * m + (s - 1)] = coef
                b[k] = row.rhs
                if row.sense == GE:
                    sign[k] = -1
                eq[k] = row.sense == EQ
            self.mats[fam] = (A, b, sign, eq)

    def violation(self, fam: str, X: np.ndarray) -> np.ndarray:
        """Largest row violation per point; ``X`` has shape (trials, n*m)."""
        A, b, sign, eq = self.mats[fam]
        if A.shape[0] == 0:
            return np.zeros(X.shape[0])
        lhs = X @ A.T - b
        v = np.where(eq, np.abs(lhs), lhs * sign)
        return v.max(axis=1)

    def satisfied(self, fam: str, X: np.ndarray, tol: float = TOL) -> np.ndarray:
        return self.violation(fam, X) <= tol

    def to_point(self, row: np.ndarray) -> FractionalPoint:
        n, m = self.shape.n, self.shape.m
        x = {}
        for i in range(1, n + 1):
            for s in range(1, m + 1):
                v = float(row[(i - 1) * m + (s - 1)])
                if v:
                    x[(s, i)] = v
        return FractionalPoint(x)


# -- samplers ------------------------------------------------------------------


def _composition(rng: np.random.Generator, D: int, m: int) -> np.ndarray:
    return rng.multinomial(D, rng.dirichlet(np.ones(m)))


def _sparse(rng, D, m):
    out = np.zeros(m, dtype=int)
    k = int(rng.integers(1, 3))
    support = rng.choice(m, size=min(k, m), replace=False)
    if len(support) == 1:
        out[support[0]] = D
    else:
        a = int(rng.integers(0, D + 1))
        out[support[0]], out[support[1]] = a, D - a
    return out


def _sample_grid(rng: np.random.Generator, shape: Shape, mode: str) -> np.ndarray:
    """Integer masses per (task, station) summing to D per task, and D."""
    n, m = shape.n, shape.m
    D = int(rng.choice(DENOMINATORS))
    G = np.zeros((n, m), dtype=int)
    preds = {j: [i for i, jj in shape.arcs if jj == j] for j in range(1, n + 1)}
    for j in range(1, n + 1):
        P = preds[j]
        if mode == "uniform" or not P:
            G[j - 1] = _composition(rng, D, m) if mode != "sparse" else _sparse(rng, D, m)
        elif mode == "sparse":
            G[j - 1] = _sparse(rng, D, m)
        elif mode == "cumulative":
            # prefix sums bounded by every predecessor's prefix sums
            cap = np.min([np.cumsum(G[i - 1]) for i in P], axis=0)
            cap[-1] = D
            prev = 0
            cdf = np.zeros(m, dtype=int)
            for s in range(m):
                lo = prev
                hi = int(cap[s]) if s < m - 1 else D
                cdf[s] = D if s == m - 1 else int(rng.integers(lo, hi + 1))
                prev = cdf[s]
            G[j - 1] = np.diff(np.concatenate(([0], cdf)))
        elif mode == "pointwise":
            # each station share bounded by the predecessors' cumulative mass
            cap = np.min([np.cumsum(G[i - 1]) for i in P], axis=0)
            left = D
            for s in range(m):
                if s == m - 1:
                    G[j - 1, s] = left
                else:
                    v = int(rng.integers(0, min(int(cap[s]), left) + 1))
                    G[j - 1, s] = v
                    left -= v
        else:
            raise ValueError(f"unknown sampling mode {mode!r}")
    return G.reshape(-1) / D


SAMPLING_MODES = ("uniform", "sparse", "cumulative", "pointwise")


def sample_points(rng: np.random.Generator, shape: Shape, trials: int) -> np.ndarray:
    out = np.empty((trials, shape.n * shape.m))
    modes = rng.integers(0, len(SAMPLING_MODES), size=trials)
    for k in range(trials):
        out[k] = _sample_grid(rng, shape, SAMPLING_MODES[modes[k]])
    return out


# -- implication checks --------------------------------------------------------


@dataclass
class ImplicationReport:
    hypothesis: str
    conclusion: str
    shape: Shape
    trials: int
    hits: int = 0
    violations: int = 0
    witness: FractionalPoint | None = None

    @property
    def hit_rate(self) -> float:
        return self.hits / self.trials if self.trials else 0.0

    @property
    def holds(self) -> bool:
        return self.violations == 0


def _check(comp: _Compiled, X: np.ndarray, hyp: str, concl: str, tol: float) -> tuple[int, int, FractionalPoint | None]:
    h = comp.satisfied(hyp, X, tol)
    bad = h & ~comp.satisfied(concl, X, tol)
    idx = np.flatnonzero(bad)
    witness = comp.to_point(X[idx[0]]) if idx.size else None
    return int(h.sum()), int(bad.sum()), witness


def verify_implications(
    seed: int,
    trials: int,
    shape=(2, 3),
    pairs=None,
    tol: float = TOL,
) -> list[ImplicationReport]:
    """Sample occurrence-feasible points and test ``hypothesis => conclusion``.

    ``shape`` is ``(n, m)`` (a chain on n tasks) or ``(n, m, arcs)``.  The
    same sample is shared by all pairs.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if pairs is None:
        pairs = [(a, b) for a in FAMILIES for b in FAMILIES if a != b]
    sh = make_shape(shape)
    comp = _Compiled(sh)
    X = sample_points(np.random.default_rng(seed), sh, trials)
    out = []
    for hyp, concl in pairs:
        hits, viol, wit = _check(comp, X, hyp, concl, tol)
        out.append(ImplicationReport(hyp, concl, sh, trials, hits, viol, wit))
    return out


# -- relation matrix -----------------------------------------------------------


@dataclass
class RelationMatrix:
    relations: dict[tuple[str, str], Relation]
    witnesses: dict[tuple[str, str], str] = field(default_factory=dict)
    families: tuple[str, ...] = FAMILIES

    def __getitem__(self, pair: tuple[str, str]) -> Relation:
        return self.relations[pair]

    def deviations(self, reference=None) -> list[tuple[str, str, Relation, Relation]]:
        reference = REFERENCE if reference is None else reference
        return [
            (a, b, self.relations[(a, b)], reference[(a, b)])
            for a, b in product(self.families, repeat=2)
            if self.relations[(a, b)] != reference[(a, b)]
        ]

    def table(self) -> str:
        short = {
            Relation.IMPLIES: "=>",
            Relation.IMPLIED_BY: "<=",
            Relation.DOMINATES: ">",
            Relation.DOMINATED_BY: "<",
            Relation.EQUIVALENT: "==",
            Relation.INCOMPARABLE: "<>",
        }
        w = 5
        lines = [" " * w + "".join(f"{f:>{w}}" for f in self.families)]
        for a in self.families:
            cells = "".join(f"{short[self.relations[(a, b)]]:>{w}}" for b in self.families)
            lines.append(f"{a:<{w}}" + cells)
        lines.append("legend: > strictly dominates, == equivalent, <> incomparable, => implies")
        return "\n".join(lines)


def relation_matrix(seed: int = 0, trials: int = 2000, shapes=None, tol: float = TOL) -> RelationMatrix:
    """Classify every ordered family pair from samples plus registry points.

    ``A => B`` holds when no point satisfying A violates B; a strict
    verdict needs a recorded point satisfying B but violating A.
    """
    shapes = default_shapes() if shapes is None else [make_shape(s) for s in shapes]
    separating: dict[tuple[str, str], str] = {}  # (A, B): point satisfies A, violates B

    for cx in builtin_counterexamples():
        got = cx.verdicts(tol) if set(FAMILIES) <= set(cx.expected) else _all_verdicts(cx, tol)
        for a, b in product(FAMILIES, repeat=2):
            if got[a] and not got[b]:
                separating.setdefault((a, b), f"registry:{cx.label}")

    rng = np.random.default_rng(seed)
    for sh in shapes:
        comp = _Compiled(sh)
        X = sample_points(rng, sh, trials)
        sat = {f: comp.satisfied(f, X, tol) for f in FAMILIES}
        for a, b in product(FAMILIES, repeat=2):
            if (a, b) in separating or a == b:
                continue
            idx = np.flatnonzero(sat[a] & ~sat[b])
            if idx.size:
                separating[(a, b)] = f"sample:{sh}:{_describe(comp.to_point(X[idx[0]]))}"

    rel = {}
    for a, b in product(FAMILIES, repeat=2):
        ab = (a, b) not in separating  # A => B
        ba = (b, a) not in separating
        if a == b or (ab and ba):
            rel[(a, b)] = Relation.EQUIVALENT
        elif ab:
            rel[(a, b)] = Relation.DOMINATES
        elif ba:
            rel[(a, b)] = Relation.DOMINATED_BY
        else:
            rel[(a, b)] = Relation.INCOMPARABLE
    return RelationMatrix(rel, dict(separating))


def _all_verdicts(cx: Counterexample, tol: float) -> dict[str, bool]:
    ctx = make_bounds_context(cx.instance, cx.spec)
    report = check_point(cx.point, cx.instance, cx.spec, list(FAMILIES), ctx, tol)
    return {f: report[f].satisfied for f in FAMILIES}


def _describe(point: FractionalPoint) -> str:
    parts = []
    for (s, i), v in sorted(point.x.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        parts.append(f"x{s}{i}={Fraction(v).limit_denominator(1 << 12)}")
    return " ".join(parts)


def strict_edges(reference=None) -> list[tuple[str, str]]:
    reference = REFERENCE if reference is None else reference
    return [pair for pair, r in reference.items() if r == Relation.DOMINATES]


def incomparable_pairs(reference=None) -> list[tuple[str, str]]:
    reference = REFERENCE if reference is None else reference
    return [(a, b) for a, b in combinations(FAMILIES, 2) if reference[(a, b)] == Relation.INCOMPARABLE]


__all__ = [
    "DENOMINATORS",
    "FAMILIES",
    "REFERENCE",
    "SAMPLING_MODES",
    "Counterexample",
    "ImplicationReport",
    "Relation",
    "RelationMatrix",
    "Shape",
    "builtin_counterexamples",
    "default_shapes",
    "incomparable_pairs",
    "make_shape",
    "registry_fidelity",
    "relation_matrix",
    "sample_points",
    "strict_edges",
    "verify_implications",
]
