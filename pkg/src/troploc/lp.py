"""Dense two-phase simplex method with Bland's anti-cycling rule.

Small and exact-ish: every location LP here has at most a few hundred
rows, so a full tableau is fine and keeps the pivoting deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PIVOT_EPS = 1e-9


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LinearProgram:
    """minimize ``c @ x`` s.t. ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``, bounds.

    ``bounds`` is a list of ``(low, high)`` pairs, ``None`` meaning
    unbounded on that side. The default is ``x >= 0`` for every variable.
    """

    c: np.ndarray
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    bounds: Optional[list] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        nv = self.c.shape[0]
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, nv, "inequality")
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, nv, "equality")
        if self.bounds is None:
            self.bounds = [(0.0, None)] * nv
        if len(self.bounds) != nv:
            raise ValueError(f"expected {nv} bounds, got {len(self.bounds)}")

    @property
    def n_vars(self):
        return self.c.shape[0]


def _rows(A, b, nv, what):
    if A is None:
        return np.zeros((0, nv)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape != (b.shape[0], nv):
        raise ValueError(f"{what} rows have shape {A.shape}, expected ({b.shape[0]}, {nv})")
    return A, b


@dataclass
class LPResult:
    value: float
    x: np.ndarray
    pivots: int = 0
    basis: list = field(default_factory=list)


def _pivot(T, basis, r, col):
    T[r] /= T[r, col]
    others = np.abs(T[:, col]) > 0
    others[r] = False
    T[others] -= np.outer(T[others, col], T[r])
    basis[r] = col


def _run(T, basis, n_cols, eps, max_pivots):
    """Minimise the objective stored in the last row over the first ``n_cols`` columns."""
    pivots = 0
    while True:
        reduced = T[-1, :n_cols]
        entering = np.flatnonzero(reduced < -eps)
        if entering.size == 0:
            return pivots
        col = entering[0]
        column = T[:-1, col]
        pos = column > eps
        if not pos.any():
            raise Unbounded("objective is unbounded below")
        ratios = np.full(column.shape, np.inf)
        ratios[pos] = T[:-1, -1][pos] / column[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + eps * max(1.0, abs(best)))
        r = min(ties, key=lambda i: basis[i])
        _pivot(T, basis, r, col)
        pivots += 1
        if pivots > max_pivots:
            raise LPError("pivot limit exceeded")


def _standard_form(lp: LinearProgram):
    """Rewrite as ``min c'y, A y = b, y >= 0`` and return a map back to x."""
    nv = lp.n_vars
    cols = []  # per original variable: list of (column index, sign)
    offset = np.zeros(nv)
    extra_ub = []
    n_cols = 0
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None and np.isfinite(lo):
            offset[j] = lo
            cols.append([(n_cols, 1.0)])
            n_cols += 1
            if hi is not None and np.isfinite(hi):
                extra_ub.append((j, hi - lo))
        elif hi is not None and np.isfinite(hi):
            offset[j] = hi
            cols.append([(n_cols, -1.0)])
            n_cols += 1
        else:
            cols.append([(n_cols, 1.0), (n_cols + 1, -1.0)])
            n_cols += 2

    def lift(A):
        out = np.zeros((A.shape[0], n_cols))
        for j, entries in enumerate(cols):
            for k, s in entries:
                out[:, k] += s * A[:, j]
        return out

    A_ub = lift(lp.A_ub)
    b_ub = lp.b_ub - lp.A_ub @ offset
    if extra_ub:
        rows = np.zeros((len(extra_ub), n_cols))
        for r, (j, width) in enumerate(extra_ub):
            rows[r, cols[j][0][0]] = 1.0
        A_ub = np.vstack([A_ub, rows])
        b_ub = np.concatenate([b_ub, [w for _, w in extra_ub]])
    A_eq = lift(lp.A_eq)
    b_eq = lp.b_eq - lp.A_eq @ offset
    c = lift(lp.c[None, :])[0]

    n_ub = A_ub.shape[0]
    A = np.vstack([np.hstack([A_ub, np.eye(n_ub)]), np.hstack([A_eq, np.zeros((A_eq.shape[0], n_ub))])])
    b = np.concatenate([b_ub, b_eq])
    c = np.concatenate([c, np.zeros(n_ub)])

    def recover(y):
        x = offset.copy()
        for j, entries in enumerate(cols):
            for k, s in entries:
                x[j] += s * y[k]
        return x

    return A, b, c, n_ub, recover


def simplex_solve(lp: LinearProgram, eps: float = PIVOT_EPS, max_pivots: int = 100_000) -> LPResult:
    """Solve ``lp`` exactly up to floating point; raises Infeasible or Unbounded."""
    A, b, c, n_ub, recover = _standard_form(lp)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: slacks of rows with b >= 0 start basic, artificials elsewhere
    slack0 = n - n_ub
    basis = [slack0 + r if r < n_ub and not neg[r] else -1 for r in range(m)]
    art = [r for r in range(m) if basis[r] < 0]
    k = len(art)
    T = np.zeros((m + 1, n + k + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    for i, r in enumerate(art):
        T[r, n + i] = 1.0
        basis[r] = n + i
    T[-1, :n] = -A[art].sum(axis=0)
    T[-1, -1] = -b[art].sum()
    pivots = _run(T, basis, n + k, eps, max_pivots)
    if -T[-1, -1] > eps * max(1.0, np.abs(b).max(initial=0.0)) * 10:
        raise Infeasible("no feasible point")

    # drive artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            row = T[r, :n]
            nz = np.flatnonzero(np.abs(row) > eps)
            if nz.size:
                _pivot(T, basis, r, nz[0])
                pivots += 1
                keep.append(r)
        else:
            keep.append(r)
    T = np.vstack([T[keep][:, list(range(n)) + [n + k]], np.zeros((1, n + 1))])
    basis = [basis[r] for r in keep]

    # phase 2
    T[-1, :n] = c
    T[-1, -1] = 0.0
    for r, col in enumerate(basis):
        if T[-1, col] != 0.0:
            T[-1] -= T[-1, col] * T[r]
    pivots += _run(T, basis, n, eps, max_pivots)

    y = np.zeros(n)
    for r, col in enumerate(basis):
        y[col] = T[r, -1]
    x = recover(y)
    return LPResult(value=float(lp.c @ x), x=x, pivots=pivots, basis=basis)
