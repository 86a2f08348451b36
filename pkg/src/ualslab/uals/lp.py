"""Exact two-phase simplex over Fractions with Bland's rule.

Solves  min c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
Problems here have at most a few hundred columns, so a dense tableau is fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class LPResult:
    status: str          # "optimal" | "infeasible" | "unbounded"
    x: tuple
    value: Fraction | None
    pivots: int


def _pivot(T, basis, r, c):
    piv = T[r][c]
    row = [v / piv for v in T[r]]
    T[r] = row
    for i in range(len(T)):
        if i != r and T[i][c]:
            f = T[i][c]
            Ti = T[i]
            T[i] = [a - f * b for a, b in zip(Ti, row)]
    basis[r] = c


def _run(T, basis, cost, allowed, limit):
    """Minimize cost over the current tableau; returns ("optimal"|"unbounded", pivots)."""
    m = len(T)
    width = len(cost)
    pivots = 0
    while True:
        cb = [cost[b] for b in basis]
        enter = None
        for j in range(width):
            if not allowed[j]:
                continue
            z = cost[j] - sum((cb[i] * T[i][j] for i in range(m) if T[i][j]), Fraction(0))
            if z < 0:
                enter = j  # Bland: first improving column
                break
        if enter is None:
            return "optimal", pivots
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded", pivots
        _pivot(T, basis, leave, enter)
        pivots += 1
        if pivots > limit:
            raise RuntimeError("simplex pivot limit exceeded")


def solve_lp(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), limit=100000) -> LPResult:
    c = [Fraction(v) for v in c]
    n = len(c)
    A_ub = [[Fraction(v) for v in row] for row in A_ub]
    A_eq = [[Fraction(v) for v in row] for row in A_eq]
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    if any(len(r) != n for r in A_ub + A_eq) or len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint shapes do not match the objective")
    mu, me = len(A_ub), len(A_eq)
    m = mu + me
    N = n + mu + m  # originals, slacks, artificials
    T = []
    zero = Fraction(0)
    for i in range(m):
        row = [zero] * (N + 1)
        if i < mu:
            src, rhs = A_ub[i], b_ub[i]
            row[n + i] = Fraction(1)
        else:
            src, rhs = A_eq[i - mu], b_eq[i - mu]
        row[:n] = src
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        row[n + mu + i] = Fraction(1)
        row[N] = rhs
        T.append(row)
    basis = [n + mu + i for i in range(m)]

    phase1 = [zero] * (n + mu) + [Fraction(1)] * m
    status, p1 = _run(T, basis, phase1, [True] * N, limit)
    if sum((T[i][N] for i in range(m) if basis[i] >= n + mu), zero) > 0:
        return LPResult("infeasible", (), None, p1)
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n + mu:
            col = next((j for j in range(n + mu) if T[i][j]), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    cost = c + [zero] * mu + [zero] * m
    allowed = [True] * (n + mu) + [False] * m
    status, p2 = _run(T, basis, cost, allowed, limit)
    if status == "unbounded":
        return LPResult("unbounded", (), None, p1 + p2)
    x = [zero] * N
    for i, b in enumerate(basis):
        x[b] = T[i][N]
    value = sum((ci * xi for ci, xi in zip(c, x[:n])), zero)
    return LPResult("optimal", tuple(x[:n]), value, p1 + p2)
