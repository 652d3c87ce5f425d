"""Dense two-phase primal simplex (Bland's rule) and integer branch-and-bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
INT_TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "limit"
    x: np.ndarray | None = None
    fun: float = math.nan
    duals: np.ndarray | None = None  # multipliers of the equality rows
    iterations: int = 0


def linprog(c, A_eq, b_eq, A_ub=None, b_ub=None, max_iter: int = 50_000) -> LPResult:
    """min c.x subject to A_eq x = b_eq, A_ub x <= b_ub, x >= 0.

    Phase one drives an artificial basis out; artificial columns stay in the
    tableau (never re-entering) so the equality duals can be read off their
    reduced costs.
    """
    c = np.asarray(c, dtype=float)
    n = len(c)
    A_eq = np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.asarray(b_eq, dtype=float).reshape(-1)
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    me, mu = len(A_eq), len(A_ub)
    m = me + mu
    # columns: x (n), slacks (mu), artificials (m)
    A = np.zeros((m, n + mu))
    A[:me, :n] = A_eq
    A[me:, :n] = A_ub
    A[me:, n:] = np.eye(mu)
    b = np.concatenate([b_eq, b_ub])
    flip = np.where(b < 0, -1.0, 1.0)
    A *= flip[:, None]
    b = b * flip
    nr = n + mu
    W = nr + m + 1
    T = np.zeros((m + 1, W))
    T[:m, :nr] = A
    T[:m, nr:nr + m] = np.eye(m)
    T[:m, -1] = b
    basis = np.arange(nr, nr + m, dtype=np.int64)
    # phase one: minimize the sum of artificials
    T[m, :nr] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    status, it1 = _kernels.simplex_iterate(T, basis, nr, max_iter, PIVOT_TOL)
    if status == 2:
        return LPResult("limit", iterations=it1)
    if -T[m, -1] > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        return LPResult("infeasible", iterations=it1)
    # pivot remaining (zero-level) artificials out where possible
    for r in range(m):
        if basis[r] >= nr:
            row = T[r, :nr]
            j = np.flatnonzero(np.abs(row) > 1e-9)
            if len(j):
                j = j[0]
                T[r] /= T[r, j]
                f = T[:, j].copy()
                f[r] = 0.0
                T -= np.outer(f, T[r])
                basis[r] = j
    # phase two objective
    cost = np.zeros(nr + m)
    cost[:n] = c
    T[m, :] = 0.0
    T[m, : nr + m] = cost
    for r in range(m):
        T[m] -= cost[basis[r]] * T[r]
    status, it2 = _kernels.simplex_iterate(T, basis, nr, max_iter, PIVOT_TOL)
    its = it1 + it2
    if status == 1:
        return LPResult("unbounded", iterations=its)
    if status == 2:
        return LPResult("limit", iterations=its)
    xfull = np.zeros(nr + m)
    xfull[basis] = T[:m, -1]
    x = xfull[:n]
    # reduced cost of artificial i is -y_i (of the flipped row)
    y = -T[m, nr:nr + m] * flip
    return LPResult("optimal", x, float(c @ x), y[:me], its)


@dataclass
class BBResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "limit"
    x: np.ndarray | None = None
    fun: float = math.nan
    nodes: int = 0
    lp_integral: bool = False
    root: LPResult | None = None
    extra: dict = field(default_factory=dict)


def solve_integer_program(c, A_eq, b_eq, A_ub=None, b_ub=None, node_limit: int = 100_000) -> BBResult:
    """min c.x with A_eq x = b_eq, A_ub x <= b_ub, x >= 0 integral; depth-first branch-and-bound."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    base_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    base_b = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    best_x, best = None, math.inf
    # each node: per-variable bounds {var: (lo, hi)}; hi None means no upper bound
    stack = [{}]
    nodes = 0
    root = None
    hit_limit = False
    while stack:
        if nodes >= node_limit:
            hit_limit = True
            break
        bounds = stack.pop()
        nodes += 1
        rows, rhs = [base_ub], [base_b]
        for var, (lo, hi) in sorted(bounds.items()):
            if hi is not None:
                rows.append(np.eye(1, n, var))
                rhs.append(np.array([float(hi)]))
            if lo > 0:
                rows.append(-np.eye(1, n, var))
                rhs.append(np.array([-float(lo)]))
        res = linprog(c, A_eq, b_eq, np.vstack(rows), np.concatenate(rhs))
        if root is None:
            root = res
        if res.status == "limit":
            hit_limit = True
            continue
        if res.status != "optimal" or res.fun >= best - 1e-9:
            continue
        frac = np.abs(res.x - np.round(res.x))
        j = int(np.argmax(frac > INT_TOL)) if np.any(frac > INT_TOL) else -1
        if j < 0:
            best, best_x = res.fun, np.round(res.x)
            continue
        v = res.x[j]
        lo, hi = bounds.get(j, (0, None))
        stack.append({**bounds, j: (math.ceil(v), hi)})
        stack.append({**bounds, j: (lo, math.floor(v))})
    lp_integral = root is not None and root.status == "optimal" and bool(
        np.all(np.abs(root.x - np.round(root.x)) <= INT_TOL)
    )
    if root is not None and root.status == "unbounded":
        return BBResult("unbounded", None, -math.inf, nodes, False, root)
    if hit_limit:
        return BBResult("limit", best_x, best, nodes, lp_integral, root)
    if best_x is None:
        return BBResult("infeasible", None, math.nan, nodes, False, root)
    return BBResult("optimal", best_x, float(c @ best_x), nodes, lp_integral, root)
