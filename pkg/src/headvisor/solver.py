"""Exact solver for small mixed-integer linear programs.

Two-phase primal simplex with Bland's rule on a dense tableau for the
continuous relaxation; best-first branch-and-bound on fractional integer
variables. Everything is deterministic: the same program yields the same
assignment bit-for-bit (for a given kernel backend).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _accel

FEAS_TOL = 1e-7
INT_TOL = 1e-6
PIVOT_TOL = 1e-9
DEFAULT_NODE_LIMIT = 10**6
MAX_PIVOTS = 100_000

SENSES = ("<=", "=", ">=")


class SolverError(RuntimeError):
    pass


class NodeLimitError(SolverError):
    """Branch-and-bound exceeded its node budget without proving optimality."""


@dataclass
class LinearProgram:
    """``min c.x`` s.t. ``A x (sense) b``, ``lo <= x <= hi``, some ``x`` integral."""

    c: np.ndarray
    A: np.ndarray
    senses: Sequence[str]
    b: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    integer: np.ndarray = None  # type: ignore[assignment]
    # Branching priority per variable (higher branches first); None = all equal.
    priority: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.shape[0]
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float)
        self.lo = np.asarray(self.lo, dtype=float)
        self.hi = np.asarray(self.hi, dtype=float)
        self.senses = tuple(self.senses)
        if self.integer is None:
            self.integer = np.zeros(n, dtype=bool)
        self.integer = np.asarray(self.integer, dtype=bool)
        if self.priority is not None:
            self.priority = np.asarray(self.priority, dtype=float)
            if self.priority.shape != (n,):
                raise ValueError("dimension mismatch in branching priorities")
        m = self.A.shape[0]
        if self.b.shape != (m,) or len(self.senses) != m:
            raise ValueError("dimension mismatch between A, b and senses")
        if self.lo.shape != (n,) or self.hi.shape != (n,) or self.integer.shape != (n,):
            raise ValueError("dimension mismatch in bounds or integrality mask")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.A))
                and np.all(np.isfinite(self.b))):
            raise ValueError("coefficients must be finite")
        if not np.all(np.isfinite(self.lo)):
            raise ValueError("lower bounds must be finite")
        if np.any(self.lo > self.hi):
            raise ValueError("variable bounds must satisfy lo <= hi")
        bad = set(self.senses) - set(SENSES)
        if bad:
            raise ValueError(f"unknown constraint sense(s) {sorted(bad)}")

    @property
    def codes(self) -> np.ndarray:
        return np.array([_SENSE_CODE[s] for s in self.senses], dtype=np.int8)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    def violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of ``x`` (0 if feasible)."""
        r = self.A @ x - self.b
        v = 0.0
        for s, ri in zip(self.senses, r):
            if s == "<=":
                v = max(v, ri)
            elif s == ">=":
                v = max(v, -ri)
            else:
                v = max(v, abs(ri))
        v = max(v, float(np.max(self.lo - x, initial=0.0)), float(np.max(x - self.hi, initial=0.0)))
        return v


@dataclass
class Solution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None
    nodes: int = 0
    pivots: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    nz = np.nonzero(col)[0]
    if nz.size:
        T[nz] -= np.outer(col[nz], T[r])


def _run(T, basis, ncols):
    status, it = _accel.simplex_iterate(T, basis, ncols, PIVOT_TOL, MAX_PIVOTS)
    if status == _accel.STATUS_ITERATION_LIMIT:
        raise SolverError("simplex pivot limit reached")
    return status, it


_LE, _EQ, _GE = 0, 1, 2
_SENSE_CODE = {"<=": _LE, "=": _EQ, ">=": _GE}


def _relax(c, A, codes, b, lo, hi):
    """Solve the LP relaxation under bounds ``lo``/``hi``; returns (status, x, obj, pivots).

    ``codes`` holds the constraint senses as ``_LE``/``_EQ``/``_GE``.
    """
    free = hi > lo
    x = lo.copy()
    idx = np.nonzero(free)[0]
    rhs = b - A @ lo
    Af = A[:, idx]
    live = np.any(Af != 0.0, axis=1)
    dead = ~live
    if np.any(dead):
        v, s = rhs[dead], codes[dead]
        if np.any(((s == _LE) & (v < -FEAS_TOL)) | ((s == _GE) & (v > FEAS_TOL))
                  | ((s == _EQ) & (np.abs(v) > FEAS_TOL))):
            return "infeasible", None, None, 0
    k = idx.size
    if k == 0:
        return "optimal", x, float(c @ x), 0
    span = hi[idx] - lo[idx]
    bounded = np.isfinite(span)
    M = np.vstack([Af[live], np.eye(k)[bounded]])
    rb = np.concatenate([rhs[live], span[bounded]])
    sense = np.concatenate([codes[live], np.full(int(bounded.sum()), _LE)])
    m = rb.size
    flip = rb < 0
    M[flip] *= -1.0
    rb[flip] *= -1.0
    sense = np.where(flip, 2 - sense, sense)
    has_slack = sense != _EQ
    has_art = sense != _LE
    n_slack = int(has_slack.sum())
    n_art = int(has_art.sum())
    width = k + n_slack + n_art + 1
    T = np.zeros((m + 1, width))
    T[:m, :k] = M
    T[:m, -1] = rb
    rows = np.arange(m)
    slack_col = k + np.cumsum(has_slack) - 1
    art_col = k + n_slack + np.cumsum(has_art) - 1
    sr = rows[has_slack]
    T[sr, slack_col[has_slack]] = np.where(sense[has_slack] == _LE, 1.0, -1.0)
    ar = rows[has_art]
    T[ar, art_col[has_art]] = 1.0
    basis = np.where(has_art, art_col, slack_col).astype(np.intp)
    art_rows = ar
    n_real = k + n_slack
    pivots = 0
    if art_rows.size:
        T[m, :n_real] = -T[art_rows, :n_real].sum(axis=0)
        T[m, -1] = -T[art_rows, -1].sum()
        _, it = _run(T, basis, n_real)
        pivots += it
        if -T[m, -1] > FEAS_TOL * max(1.0, float(np.abs(rb).max())):
            return "infeasible", None, None, pivots
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n_real:
                nz = np.nonzero(np.abs(T[i, :n_real]) > PIVOT_TOL)[0]
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                    pivots += 1
                else:
                    keep[i] = False
        cols = np.r_[np.arange(n_real), width - 1]
        T = np.ascontiguousarray(np.vstack([T[:m][keep][:, cols], np.zeros((1, cols.size))]))
        basis = np.ascontiguousarray(basis[keep])
        m = basis.size
    cost = np.zeros(T.shape[1])
    cost[:k] = c[idx]
    T[m] = cost
    cb = cost[basis]
    T[m] -= cb @ T[:m]
    status, it = _run(T, basis, n_real)
    pivots += it
    if status == _accel.STATUS_UNBOUNDED:
        return "unbounded", None, None, pivots
    y = np.zeros(T.shape[1] - 1)
    y[basis] = T[:m, -1]
    x[idx] = lo[idx] + y[:k]
    return "optimal", x, float(c @ x), pivots


def solve_relaxation(lp: LinearProgram) -> Solution:
    status, x, obj, piv = _relax(lp.c, lp.A, lp.codes, lp.b, lp.lo, lp.hi)
    return Solution(status, x, obj, nodes=1, pivots=piv)


def _branch_var(x, integer, priority=None):
    """Most fractional integer variable, lowest index among ties.

    With priorities, only the highest class holding a fractional variable
    is considered.
    """
    frac = np.abs(x - np.round(x))
    frac[~integer] = 0.0
    cand = frac > INT_TOL
    if not np.any(cand):
        return -1
    if priority is not None:
        top = priority[cand].max()
        frac[priority < top] = 0.0
    return int(np.argmax(frac))  # first index among ties


def solve(
    lp: LinearProgram,
    node_limit: int = DEFAULT_NODE_LIMIT,
    external: Callable[[LinearProgram], Solution] | None = None,
) -> Solution:
    """Exact MILP optimum by best-first branch-and-bound.

    ``external``, if given, is called instead and must honour the same
    contract; the bundled solver is the default.
    """
    if external is not None:
        return external(lp)
    ints = lp.integer
    if np.any(ints & ~np.isfinite(lp.hi)):
        raise ValueError("integer variables need finite bounds")
    codes = lp.codes
    lo0 = lp.lo.copy()
    hi0 = lp.hi.copy()
    lo0[ints] = np.ceil(lo0[ints] - INT_TOL)
    hi0[ints] = np.floor(hi0[ints] + INT_TOL)
    if np.any(lo0 > hi0):
        return Solution("infeasible", nodes=0)
    status, x, obj, piv = _relax(lp.c, lp.A, codes, lp.b, lo0, hi0)
    pivots = piv
    if status != "optimal":
        return Solution(status, nodes=1, pivots=pivots)
    heap = [(obj, 0, 0, lo0, hi0, x)]
    seq = 1
    nodes = 1
    best_x = None
    best = math.inf
    while heap:
        bound, negdepth, _, lo, hi, x = heapq.heappop(heap)
        if bound >= best - 1e-9:
            continue
        j = _branch_var(x, ints, lp.priority)
        if j < 0:
            xr = x.copy()
            xr[ints] = np.round(xr[ints])
            if lp.violation(xr) <= INT_TOL:
                val = float(lp.c @ xr)
                if val < best:
                    best, best_x = val, xr
                continue
            # Rounding broke feasibility; keep the fractional point's bound honest.
            j = int(np.argmax(np.where(ints, np.abs(x - np.round(x)), -1.0)))
        v = x[j]
        for side in (0, 1):
            clo, chi = lo.copy(), hi.copy()
            if side == 0:
                chi[j] = math.floor(v)
            else:
                clo[j] = math.ceil(v)
            if clo[j] > chi[j]:
                continue
            nodes += 1
            if nodes > node_limit:
                raise NodeLimitError(f"branch-and-bound exceeded {node_limit} nodes")
            st, cx, cobj, piv = _relax(lp.c, lp.A, codes, lp.b, clo, chi)
            pivots += piv
            if st == "optimal" and cobj < best - 1e-9:
                heapq.heappush(heap, (cobj, negdepth - 1, seq, clo, chi, cx))
                seq += 1
            elif st == "unbounded":
                return Solution("unbounded", nodes=nodes, pivots=pivots)
    if best_x is None:
        return Solution("infeasible", nodes=nodes, pivots=pivots)
    return Solution("optimal", best_x, best, nodes=nodes, pivots=pivots)
