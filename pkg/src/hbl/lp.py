"""Exact two-phase simplex over the rationals with Bland's rule.

Problems are stated as::

    minimize    c . x
    subject to  rows[i] . x  (<=, >=, =)  rhs[i]
                x_k >= 0 for every k not listed in ``free``

Every pivot is carried out in :class:`~fractions.Fraction` arithmetic, so an
optimal basic solution is returned exactly.  Bland's smallest-index rule
makes the method cycle-free on degenerate problems, which the polytope
systems here usually are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

LE, GE, EQ = "<=", ">=", "="


class InfeasibleError(RuntimeError):
    pass


class UnboundedError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


def _pivot(T, basis, r, c):
    p = T[r][c]
    T[r] = [v / p for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run(T, basis, cost, allowed, max_pivots):
    """Minimize ``cost`` over the tableau in place; returns pivot count."""
    m = len(T)
    width = len(T[0]) - 1
    pivots = 0
    while True:
        # reduced costs: c_j - c_B B^-1 A_j, with the tableau already B^-1 A
        cb = [cost[b] for b in basis]
        enter = None
        for j in range(width):
            if not allowed[j] or j in basis:
                continue
            red = cost[j] - sum((cb[i] * T[i][j] for i in range(m)), Fraction(0))
            if red < 0:
                enter = j
                break
        if enter is None:
            return pivots
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedError("objective unbounded below")
        _pivot(T, basis, leave, enter)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot cap exceeded")


def solve_lp(c: Sequence, rows: Sequence[Sequence], senses: Sequence[str], rhs: Sequence,
             free: Sequence[int] = (), maximize: bool = False,
             max_pivots: int = 100_000) -> LPResult:
    """Solve a small LP exactly.  Raises InfeasibleError / UnboundedError."""
    n = len(c)
    c = [Fraction(v) for v in c]
    if maximize:
        c = [-v for v in c]
    free = sorted(set(free))
    # columns: x (n), then x_k^- for each free k, then slacks, then artificials
    cols_neg = {k: n + i for i, k in enumerate(free)}
    nx = n + len(free)

    A = []
    b = []
    sn = []
    for row, s, r in zip(rows, senses, rhs):
        row = [Fraction(v) for v in row]
        full = row + [-row[k] for k in free]
        r = Fraction(r)
        if r < 0:
            full = [-v for v in full]
            r = -r
            s = {LE: GE, GE: LE, EQ: EQ}[s]
        A.append(full)
        b.append(r)
        sn.append(s)
    m = len(A)

    n_slack = sum(s != EQ for s in sn)
    n_art = sum(s != LE for s in sn)
    width = nx + n_slack + n_art
    T = []
    basis = []
    si = nx
    ai = nx + n_slack
    art_cols = []
    for i in range(m):
        row = A[i] + [Fraction(0)] * (n_slack + n_art) + [b[i]]
        if sn[i] == LE:
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if sn[i] == GE:
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        T.append(row)

    allowed = [True] * width
    pivots = 0
    if art_cols:
        cost1 = [Fraction(0)] * width
        for j in art_cols:
            cost1[j] = Fraction(1)
        pivots += _run(T, basis, cost1, allowed, max_pivots)
        infeas = sum((T[i][-1] for i in range(m) if basis[i] in art_cols), Fraction(0))
        if infeas != 0:
            raise InfeasibleError("no feasible point")
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] in art_cols:
                col = next((j for j in range(nx + n_slack) if T[i][j] != 0), None)
                if col is None:
                    continue
                _pivot(T, basis, i, col)
                pivots += 1
            keep.append(i)
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
        for j in art_cols:
            allowed[j] = False

    cost2 = c + [-c[k] for k in free] + [Fraction(0)] * (n_slack + n_art)
    pivots += _run(T, basis, cost2, allowed, max_pivots)

    z = [Fraction(0)] * width
    for i, bv in enumerate(basis):
        z[bv] = T[i][-1]
    x = [z[k] for k in range(n)]
    for k, j in cols_neg.items():
        x[k] -= z[j]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    if maximize:
        value = -value
    return LPResult(value, tuple(x), pivots)
