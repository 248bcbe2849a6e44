"""Exact linear programs  max c.x  s.t.  A x <= b,  x >= 0,  b >= 0.

Every linear program in the package can be put in this form, so the
origin is always a feasible starting basis and no phase 1 is needed.

Two exact routes share one entry point. The simplex route pivots a
sparse Fraction tableau (dict column -> Fraction) with Bland's rule,
which guarantees termination on degenerate problems. The certified route
asks HiGHS for a floating-point optimum only to guess which constraints
are active, rebuilds that vertex and its dual multipliers in rational
arithmetic, and accepts them only if primal feasibility, dual
feasibility and equal objectives all hold exactly. Anything that fails
the check falls back to the simplex route, so the floating-point solver
never decides an answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

Row = Union[Mapping[int, object], Sequence[object]]

CERTIFY_THRESHOLD = 20_000


class LPError(ArithmeticError):
    pass


class PivotLimit(LPError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" or "unbounded"
    value: Optional[Fraction]
    x: List[Fraction]
    duals: List[Fraction]
    pivots: int


def _as_sparse(row: Row) -> Dict[int, Fraction]:
    if isinstance(row, Mapping):
        items = row.items()
    else:
        items = enumerate(row)
    return {int(j): Fraction(v) for j, v in items if v != 0}


def maximize(
    c: Row,
    A: Sequence[Row],
    b: Sequence[object],
    n: Optional[int] = None,
    max_pivots: Optional[int] = None,
    method: str = "auto",
) -> LPResult:
    """Solve the LP exactly.

    ``c`` and the rows of ``A`` are dense sequences or sparse mappings over
    variables ``0..n-1``. Returns primal values and the row duals ``y``
    (``y >= 0``, ``A^T y >= c`` and ``b.y = value`` at optimality).
    ``method`` is "simplex", "certified" or "auto" (certified for large
    problems, with the simplex as fallback).
    """
    rows = [_as_sparse(r) for r in A]
    cost = _as_sparse(c)
    rhs = [Fraction(v) for v in b]
    if len(rhs) != len(rows):
        raise LPError("row count mismatch")
    if any(v < 0 for v in rhs):
        raise LPError("right-hand side must be nonnegative")
    if n is None:
        n = 1 + max([j for r in rows for j in r] + [j for j in cost] + [-1])
    m = len(rows)
    if method not in ("auto", "simplex", "certified"):
        raise LPError(f"unknown method {method!r}")
    if method == "certified" or (method == "auto" and m * n > CERTIFY_THRESHOLD):
        res = _certified(cost, rows, rhs, n)
        if res is not None:
            return res
    return _simplex(cost, rows, rhs, n, max_pivots)


def _simplex(cost, rows, rhs, n, max_pivots) -> LPResult:
    m = len(rows)
    rows = [dict(r) for r in rows]
    rhs = list(rhs)
    # slack of row i is variable n + i, basic at the start
    basis = [n + i for i in range(m)]
    obj: Dict[int, Fraction] = dict(cost)  # z = val + sum obj[j] x_j
    pivots = 0
    while True:
        entering = min((j for j, d in obj.items() if d > 0), default=None)
        if entering is None:
            break
        best = None
        leave_row = -1
        for i, row in enumerate(rows):
            a = row.get(entering)
            if a is None or a <= 0:
                continue
            ratio = rhs[i] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave_row]):
                best = ratio
                leave_row = i
        if leave_row < 0:
            return LPResult("unbounded", None, [], [], pivots)
        if max_pivots is not None and pivots >= max_pivots:
            raise PivotLimit(f"pivot limit {max_pivots} reached")
        _pivot(rows, rhs, basis, obj, leave_row, entering)
        pivots += 1
    x = [Fraction(0)] * n
    for i, v in enumerate(basis):
        if v < n:
            x[v] = rhs[i]
    duals = [-obj.get(n + i, Fraction(0)) for i in range(m)]
    value = sum((cost[j] * x[j] for j in cost), Fraction(0))
    return LPResult("optimal", value, x, duals, pivots)


def _pivot(rows, rhs, basis, obj, r, s) -> Fraction:
    """Pivot x_s into the basis on row r; returns the objective increase."""
    prow = rows[r]
    a = prow.pop(s)
    old = basis[r]
    inv = 1 / a
    # express x_s through the row:  x_s + sum (a_j/a) x_j + (1/a) x_old = b/a
    new = {j: v * inv for j, v in prow.items()}
    new[old] = inv
    rows[r] = new
    rhs[r] = rhs[r] * inv
    basis[r] = s
    br = rhs[r]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row.pop(s, None)
        if f is None:
            continue
        for j, v in new.items():
            w = row.get(j, 0) - f * v
            if w:
                row[j] = w
            else:
                row.pop(j, None)
        rhs[i] -= f * br
    d = obj.pop(s, None)
    if not d:
        return Fraction(0)
    for j, v in new.items():
        w = obj.get(j, 0) - d * v
        if w:
            obj[j] = w
        else:
            obj.pop(j, None)
    return d * br


# -- certified route --


class _Eliminator:
    """Incremental sparse Gaussian elimination over the rationals."""

    def __init__(self):
        self.rows: List[Tuple[int, Dict[int, Fraction], Fraction]] = []
        self.pivots: Dict[int, int] = {}

    def reduce(self, row: Dict[int, Fraction], b: Fraction):
        row = dict(row)
        for k, (p, prow, pb) in enumerate(self.rows):
            f = row.pop(p, None)
            if f is None:
                continue
            for j, v in prow.items():
                if j == p:
                    continue
                w = row.get(j, 0) - f * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
            b -= f * pb
        return row, b

    def add(self, row: Dict[int, Fraction], b: Fraction = Fraction(0)) -> bool:
        row, b = self.reduce(row, b)
        if not row:
            return False
        p = min(row)
        inv = 1 / row[p]
        row = {j: v * inv for j, v in row.items()}
        self.pivots[p] = len(self.rows)
        self.rows.append((p, row, b * inv))
        return True

    def solve(self, n: int) -> Optional[List[Fraction]]:
        if len(self.rows) != n:
            return None
        x = [Fraction(0)] * n
        for p, row, b in reversed(self.rows):
            x[p] = b - sum((v * x[j] for j, v in row.items() if j != p), Fraction(0))
        return x


def _certified(cost, rows, rhs, n) -> Optional[LPResult]:
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csr_matrix
    except ImportError:  # pragma: no cover
        return None
    m = len(rows)
    data, ri, ci = [], [], []
    for i, r in enumerate(rows):
        for j, v in r.items():
            ri.append(i)
            ci.append(j)
            data.append(float(v))
    A = csr_matrix((data, (ri, ci)), shape=(m, n))
    c = np.zeros(n)
    for j, v in cost.items():
        c[j] = float(v)
    b = np.array([float(v) for v in rhs])
    res = linprog(-c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    xf = res.x
    yf = -res.ineqlin.marginals
    slack = b - A @ xf
    tol = 1e-7
    redcost = A.T @ yf - c
    # active constraints: rows as indices 0..m-1, bounds x_j >= 0 as m+j
    cand = [(-yf[i], i) for i in range(m) if abs(slack[i]) <= tol]
    cand += [(-redcost[j], m + j) for j in range(n) if xf[j] <= tol]
    cand.sort()
    elim = _Eliminator()
    active = []
    for _, a in cand:
        if a < m:
            ok = elim.add(rows[a], rhs[a])
        else:
            ok = elim.add({a - m: Fraction(1)}, Fraction(0))
        if ok:
            active.append(a)
            if len(active) == n:
                break
    x = elim.solve(n)
    if x is None or any(v < 0 for v in x):
        return None
    for r, bi in zip(rows, rhs):
        if sum((v * x[j] for j, v in r.items()), Fraction(0)) > bi:
            return None
    # dual: c_k = sum_{rows i active} y_i a_ik - mu_k for active bounds
    cols: List[Dict[int, Fraction]] = [dict() for _ in range(n)]
    for t, a in enumerate(active):
        if a < m:
            for j, v in rows[a].items():
                cols[j][t] = v
        else:
            cols[a - m][t] = Fraction(-1)
    delim = _Eliminator()
    for k in range(n):
        if not delim.add(cols[k], cost.get(k, Fraction(0))):
            return None
    z = delim.solve(n)
    if z is None or any(v < 0 for v in z):
        return None
    y = [Fraction(0)] * m
    for t, a in enumerate(active):
        if a < m:
            y[a] = z[t]
    value = sum((cost[j] * x[j] for j in cost), Fraction(0))
    if sum((yi * bi for yi, bi in zip(y, rhs)), Fraction(0)) != value:
        return None
    return LPResult("optimal", value, x, y, 0)
