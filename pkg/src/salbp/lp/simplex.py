"""Bounded-variable simplex on a dense tableau.

Rows are brought to ``A x + s = b`` form (``>=`` rows negated, one slack per
``<=`` row, artificials where the all-at-lower-bound start is infeasible).
Phase 1 drives artificials to zero, phase 2 minimises the objective.  The
dual simplex re-optimises after bound changes, which is how branch-and-bound
nodes are warm-started.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from salbp.errors import NumericalBreakdown

FEAS_TOL = 1e-7
INT_TOL = 1e-6
OBJ_TOL = 1e-6
PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
REFACTOR_EVERY = 200

BASIC, AT_LB, AT_UB = 0, 1, 2


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective: float | None
    values: np.ndarray | None
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status == Status.OPTIMAL


class Tableau:
    """Simplex state for one model; copy it to branch."""

    def __init__(self, c, A, senses, b, lb, ub):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).copy()
        m, n = A.shape
        A = A.copy()
        for i, s in enumerate(senses):
            if s == ">=":
                A[i] *= -1
                b[i] *= -1
        lb = np.asarray(lb, dtype=float)
        ub = np.asarray(ub, dtype=float)
        if not (np.all(np.isfinite(lb)) and np.all(np.isfinite(ub))):
            raise ValueError("structural variables need finite bounds")
        is_le = np.array([s != "=" for s in senses], dtype=bool)
        n_slack = int(is_le.sum())
        resid = b - A @ lb

        slack_cols = np.zeros((m, n_slack))
        slack_of_row = np.full(m, -1)
        k = 0
        for i in range(m):
            if is_le[i]:
                slack_cols[i, k] = 1.0
                slack_of_row[i] = n + k
                k += 1
        need_art = [i for i in range(m) if not (is_le[i] and resid[i] >= 0)]
        art_cols = np.zeros((m, len(need_art)))
        for k, i in enumerate(need_art):
            art_cols[i, k] = 1.0 if resid[i] >= 0 else -1.0

        self.n_struct = n
        self.m = m
        self.A0 = np.hstack([A, slack_cols, art_cols])
        self.b0 = b
        N = self.A0.shape[1]
        self.lb = np.concatenate([lb, np.zeros(n_slack), np.zeros(len(need_art))])
        self.ub = np.concatenate([ub, np.full(n_slack, np.inf), np.full(len(need_art), np.inf)])
        self.art = np.arange(n + n_slack, N)
        self.cost = np.concatenate([np.asarray(c, dtype=float), np.zeros(N - n)])

        self.x = self.lb.copy()
        self.status = np.full(N, AT_LB, dtype=np.int8)
        self.basis = np.empty(m, dtype=int)
        art_of_row = {i: n + n_slack + k for k, i in enumerate(need_art)}
        for i in range(m):
            j = art_of_row.get(i, slack_of_row[i])
            self.basis[i] = j
            self.status[j] = BASIC
        self.x[self.basis] = np.abs(resid)
        # basis matrix is diagonal +-1, so B^-1 A is a row scaling
        signs = self.A0[np.arange(m), self.basis]
        self.T = self.A0 / signs[:, None]
        self.d = np.zeros(N)
        self.iterations = 0
        self.pivots_since_refactor = 0
        self.phase1_done = len(need_art) == 0

    def copy(self) -> "Tableau":
        other = object.__new__(Tableau)
        other.__dict__.update(self.__dict__)
        for name in ("T", "x", "status", "basis", "d", "lb", "ub"):
            setattr(other, name, getattr(self, name).copy())
        return other

    # -- core operations --------------------------------------------------

    def _reduced_costs(self, cost) -> None:
        self.d = cost - cost[self.basis] @ self.T

    def _refactor(self) -> None:
        B = self.A0[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.A0)
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("basis matrix became singular") from exc
        nonbasic = self.status != BASIC
        rhs = self.b0 - self.A0[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = np.linalg.solve(B, rhs)
        self.pivots_since_refactor = 0

    def _pivot(self, r: int, q: int, theta: float, leaving_status: int, cost) -> None:
        T = self.T
        if theta != 0.0:
            self.x[self.basis] -= theta * T[:, q]
            self.x[q] += theta
        leaving = self.basis[r]
        self.x[leaving] = self.lb[leaving] if leaving_status == AT_LB else self.ub[leaving]
        piv = T[r, q]
        if abs(piv) < PIVOT_TOL:
            raise NumericalBreakdown(f"pivot element {piv:.3g} too small")
        T[r] /= piv
        col = T[:, q].copy()
        col[r] = 0.0
        T -= col[:, None] * T[r]
        self.basis[r] = q
        self.status[q] = BASIC
        self.status[leaving] = leaving_status
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= REFACTOR_EVERY:
            self._refactor()
            self._reduced_costs(cost)
        else:
            self.d -= self.d[q] * T[r]

    def _movable(self):
        return (self.status != BASIC) & (self.ub - self.lb > PIVOT_TOL)

    def primal(self, cost, max_iter: int) -> Status:
        """Primal simplex from a primal feasible basis."""
        self._reduced_costs(cost)
        stall_limit = 5 * (self.m + len(self.x))
        stall = 0
        bland = False
        best = cost @ self.x
        for _ in range(max_iter):
            movable = self._movable()
            cand = movable & (
                ((self.status == AT_LB) & (self.d < -OPT_TOL))
                | ((self.status == AT_UB) & (self.d > OPT_TOL))
            )
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return Status.OPTIMAL
            q = int(idx[0]) if bland else int(idx[np.abs(self.d[idx]).argmax()])
            direction = 1.0 if self.status[q] == AT_LB else -1.0
            col = self.T[:, q] * direction
            xb = self.x[self.basis]
            lbb = self.lb[self.basis]
            ubb = self.ub[self.basis]
            ratios = np.full(self.m, np.inf)
            pos = col > PIVOT_TOL
            neg = col < -PIVOT_TOL
            ratios[pos] = (xb[pos] - lbb[pos]) / col[pos]
            with np.errstate(invalid="ignore"):
                ratios[neg] = (ubb[neg] - xb[neg]) / (-col[neg])
            np.maximum(ratios, 0.0, out=ratios)
            theta_rows = ratios.min() if self.m else np.inf
            flip = self.ub[q] - self.lb[q]
            if not np.isfinite(theta_rows) and not np.isfinite(flip):
                return Status.UNBOUNDED
            self.iterations += 1
            if flip <= theta_rows:
                self.x[self.basis] -= flip * col
                if direction > 0:
                    self.x[q] = self.ub[q]
                    self.status[q] = AT_UB
                else:
                    self.x[q] = self.lb[q]
                    self.status[q] = AT_LB
            else:
                ties = np.flatnonzero(ratios <= theta_rows + 1e-12)
                if bland:
                    r = int(ties[self.basis[ties].argmin()])
                else:
                    r = int(ties[np.abs(col[ties]).argmax()])
                theta = ratios[r]
                leaving_status = AT_LB if pos[r] else AT_UB
                self._pivot(r, q, direction * theta, leaving_status, cost)
            obj = cost @ self.x
            if obj < best - 1e-12:
                best = obj
                stall = 0
            else:
                stall += 1
                if stall > stall_limit:
                    bland = True
        return Status.ITERATION_LIMIT

    def dual(self, cost, max_iter: int) -> Status:
        """Dual simplex from a dual feasible basis."""
        self._reduced_costs(cost)
        stall_limit = 5 * (self.m + len(self.x))
        stall = 0
        bland = False
        best = -np.inf
        # bounds are fixed during a dual run, only the statuses change
        wide = self.ub - self.lb > PIVOT_TOL
        for _ in range(max_iter):
            basis = self.basis
            xb = self.x[basis]
            below = self.lb[basis] - xb
            above = xb - self.ub[basis]
            infeas = np.maximum(below, above)
            bad = (infeas > FEAS_TOL).nonzero()[0]
            if bad.size == 0:
                return Status.OPTIMAL
            if bland:
                r = int(bad[self.basis[bad].argmin()])
            else:
                r = int(bad[infeas[bad].argmax()])
            increase = below[r] > above[r]
            leaving = self.basis[r]
            target = self.lb[leaving] if increase else self.ub[leaving]
            row = self.T[r]
            at_lb = self.status == AT_LB
            at_ub = self.status == AT_UB
            if increase:
                elig = wide & ((at_lb & (row < -PIVOT_TOL)) | (at_ub & (row > PIVOT_TOL)))
            else:
                elig = wide & ((at_lb & (row > PIVOT_TOL)) | (at_ub & (row < -PIVOT_TOL)))
            idx = elig.nonzero()[0]
            if idx.size == 0:
                return Status.INFEASIBLE
            ratios = np.abs(self.d[idx]) / np.abs(row[idx])
            rmin = ratios.min()
            ties = idx[ratios <= rmin + 1e-12]
            q = int(ties[0]) if bland else int(ties[np.abs(row[ties]).argmax()])
            theta = (self.x[leaving] - target) / row[q]
            self.iterations += 1
            self._pivot(r, q, theta, AT_LB if increase else AT_UB, cost)
            obj = cost @ self.x
            if obj > best + 1e-12:
                best = obj
                stall = 0
            else:
                stall += 1
                if stall > stall_limit:
                    bland = True
        return Status.ITERATION_LIMIT

    # -- driver -----------------------------------------------------------

    def _max_iter(self) -> int:
        return 50 * (self.m + len(self.x)) + 1000

    def solve(self) -> Status:
        """Two-phase primal simplex from the starting basis."""
        if not self.phase1_done:
            c1 = np.zeros(len(self.x))
            c1[self.art] = 1.0
            st = self.primal(c1, self._max_iter())
            if st != Status.OPTIMAL:
                return st
            if c1 @ self.x > FEAS_TOL * max(1.0, float(np.abs(self.b0).max(initial=0.0))):
                return Status.INFEASIBLE
            self.ub[self.art] = 0.0
            self.phase1_done = True
        return self.primal(self.cost, self._max_iter())

    def set_bounds(self, j: int, lb: float, ub: float) -> None:
        if self.status[j] != BASIC:
            old = self.x[j]
            new = lb if self.status[j] == AT_LB else ub
            self.x[self.basis] -= (new - old) * self.T[:, j]
            self.x[j] = new
        self.lb[j] = lb
        self.ub[j] = ub

    def reoptimize(self) -> Status:
        st = self.dual(self.cost, self._max_iter())
        if st != Status.OPTIMAL:
            return st
        return self.primal(self.cost, self._max_iter())

    @property
    def objective(self) -> float:
        return float(self.cost @ self.x)

    def values(self) -> np.ndarray:
        return self.x[: self.n_struct].copy()


def model_arrays(model):
    """Dense arrays ``(c, A, senses, b, lb, ub)`` of a linear model."""
    n = model.n_vars
    A = np.zeros((model.n_rows, n))
    for i, con in enumerate(model.constraints):
        for j, v in con.coefs:
            A[i, j] = v
    c = np.zeros(n)
    for j, v in model.objective:
        c[j] = v
    senses = [con.sense for con in model.constraints]
    b = np.array([con.rhs for con in model.constraints], dtype=float)
    lb = np.array([v.lb for v in model.variables], dtype=float)
    ub = np.array([v.ub for v in model.variables], dtype=float)
    return c, A, senses, b, lb, ub


def tableau_for(model) -> Tableau:
    return Tableau(*model_arrays(model))


def solve_lp(model) -> LpSolution:
    """Optimal LP relaxation of ``model`` (integrality dropped)."""
    if model.n_vars < 1:
        raise ValueError("model has no variables")
    tab = tableau_for(model)
    st = tab.solve()
    if st == Status.OPTIMAL:
        tab._refactor()
        return LpSolution(st, tab.objective, tab.values(), tab.iterations)
    return LpSolution(st, None, None, tab.iterations)
