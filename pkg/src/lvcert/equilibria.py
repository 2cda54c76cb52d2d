"""Equilibria on support sets and pairwise nullcline intersections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Arith, LVSystem, Number

MAX_ENUMERATION_N = 20


def solve_linear(M: Sequence[Sequence[Number]], rhs: Sequence[Number], arith: Arith) -> list | None:
    """Gaussian elimination; ``None`` if singular.

    Exact mode pivots on the first nonzero entry. Float mode uses partial
    pivoting and treats |pivot| <= eps as singular.
    """
    m = len(M)
    rows = [list(M[r]) + [rhs[r]] for r in range(m)]
    for c in range(m):
        if arith.exact:
            piv = next((r for r in range(c, m) if rows[r][c] != 0), None)
        else:
            piv = max(range(c, m), key=lambda r: abs(rows[r][c]))
            if abs(rows[piv][c]) <= arith.eps:
                piv = None
        if piv is None:
            return None
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][c]
        for r in range(c + 1, m):
            f = rows[r][c] / p
            if f:
                for cc in range(c, m + 1):
                    rows[r][cc] -= f * rows[c][cc]
    x = [None] * m
    for r in range(m - 1, -1, -1):
        s = rows[r][m] - sum(rows[r][cc] * x[cc] for cc in range(r + 1, m))
        x[r] = s / rows[r][r]
    return x


@dataclass(frozen=True)
class SupportSolve:
    """Outcome of solving alpha_j . x = 1 for j in ``support`` with x zero off the support.

    status is one of ``ok``, ``singular``, ``boundary`` (some component zero
    under the active comparison) or ``negative``.
    """

    support: tuple
    status: str
    values: tuple | None  # full-length point when the restricted matrix is nonsingular


@dataclass(frozen=True)
class Equilibrium:
    support: tuple
    point: tuple


def support_solve(sys: LVSystem, J: Iterable[int]) -> SupportSolve:
    J = tuple(sorted(set(J)))
    ar = sys.arith
    if any(j < 0 or j >= sys.n for j in J):
        raise IndexError("support index out of range")
    if not J:
        return SupportSolve(J, "ok", (ar.zero(),) * sys.n)
    M = [[sys.A[r][c] for c in J] for r in J]
    sol = solve_linear(M, [ar.one()] * len(J), ar)
    if sol is None:
        return SupportSolve(J, "singular", None)
    point = [ar.zero()] * sys.n
    for j, v in zip(J, sol):
        point[j] = v
    point = tuple(point)
    if any(ar.is_zero(v) for v in sol):
        return SupportSolve(J, "boundary", point)
    if any(v < 0 for v in sol):
        return SupportSolve(J, "negative", point)
    return SupportSolve(J, "ok", point)


def solve_support_equilibrium(sys: LVSystem, J: Iterable[int]) -> Equilibrium | None:
    res = support_solve(sys, J)
    if res.status != "ok":
        return None
    return Equilibrium(res.support, res.values)


def enumerate_equilibria(sys: LVSystem) -> list:
    """The origin plus every strictly positive support solution, ordered by support size then lexicographically."""
    if sys.n > MAX_ENUMERATION_N:
        raise ValueError(f"refusing to enumerate 2^{sys.n} supports (limit n <= {MAX_ENUMERATION_N})")
    out = [Equilibrium((), (sys.arith.zero(),) * sys.n)]
    for size in range(1, sys.n + 1):
        for J in itertools.combinations(range(sys.n), size):
            eq = solve_support_equilibrium(sys, J)
            if eq is not None:
                out.append(eq)
    return out


def pairwise_intersection(sys: LVSystem, i: int, j: int) -> tuple | None:
    """gamma_i and gamma_j meeting in the (x_i, x_j) coordinate plane, if at a positive point."""
    if i == j:
        raise ValueError("need i != j")
    A, ar = sys.A, sys.arith
    den = A[i][i] * A[j][j] - A[i][j] * A[j][i]
    if not ar.gt(den, 0):
        return None
    ei = (A[j][j] - A[i][j]) / den
    ej = (A[i][i] - A[j][i]) / den
    if not (ar.gt(ei, 0) and ar.gt(ej, 0)):
        return None
    point = [ar.zero()] * sys.n
    point[i], point[j] = ei, ej
    return tuple(point)
