"""Checkers for the survival/extinction criteria.

Every checker returns a :class:`ConditionReport`. For strict inequalities
``margin > 0`` exactly when the criterion holds; a margin that is zero under
the active comparison (exactly zero, or within eps in float mode) is flagged
``boundary`` and counted as a failure rather than guessed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Cell, LVSystem, Number, cell_plane_vertices, dot, project_support


class CriterionDisagreement(RuntimeError):
    """The two equivalent phrasings of the persistence condition gave different answers."""


@dataclass(frozen=True)
class ConditionReport:
    name: str
    indices: tuple
    holds: bool
    margin: Number | None
    details: tuple = ()  # (label, lhs, rhs, ok) per sub-inequality
    boundary: bool = False
    params: dict = field(default_factory=dict, compare=False)  # set by the analyzer for replay


def _strict(ar, lhs, rhs):
    """``lhs < rhs`` with margin ``rhs - lhs`` and a boundary flag."""
    c = ar.cmp(lhs, rhs)
    return c < 0, rhs - lhs, c == 0


def _report(name, indices, parts, ar) -> ConditionReport:
    """Fold strict sub-inequalities ``(label, lhs, rhs)`` into one report."""
    details = []
    holds, margin, boundary = True, None, False
    for label, lhs, rhs in parts:
        ok, m, b = _strict(ar, lhs, rhs)
        details.append((label, lhs, rhs, ok))
        holds &= ok
        boundary |= b
        margin = m if margin is None else min(margin, m)
    return ConditionReport(name, tuple(indices), holds, margin, tuple(details), boundary and not holds)


def _rest(sys: LVSystem, active, *drop) -> list:
    act = range(sys.n) if active is None else sorted(set(active))
    return [j for j in act if j not in drop]


def check_persistence_algebraic(sys: LVSystem, W: Sequence[Number], k: int, active: Iterable[int] | None = None) -> ConditionReport:
    """Pairwise test: for each active j != k

        max(0, a_kj/a_jj (1 - alpha_j.W_s)) < 1 - alpha_k.W_s,   s = active minus {k, j}.

    Holding for every j implies the geometric persistence condition for k;
    holding for every (k, j) is equivalent to it holding for every k.
    """
    A, ar = sys.A, sys.arith
    zero, one = ar.zero(), ar.one()
    act = _rest(sys, active)
    parts = []
    for j in _rest(sys, active, k):
        Ws = project_support(W, [l for l in act if l not in (k, j)])
        lhs = max(zero, A[k][j] / A[j][j] * (one - dot(A[j], Ws)))
        parts.append((f"j={j}", lhs, one - dot(A[k], Ws)))
    if not parts:
        # nothing competes with k on this face
        parts.append(("isolated", zero, one))
    return _report("persistence_algebraic", (k,), parts, ar)


def check_persistence_geometric(sys: LVSystem, W: Sequence[Number], k: int, active: Iterable[int] | None = None) -> ConditionReport:
    """Persistence of species k against bound W, decided on vertices.

    Holds when W projected off k (and off inactive species) is below gamma_k,
    or else when gamma_k cut by [0, that projection] is above every other
    active gamma_j. The dual phrasing (every gamma_j cut by the same box is
    below gamma_k) is evaluated too; disagreement raises.
    """
    A, ar, n = sys.A, sys.arith, sys.n
    one = ar.one()
    rest = _rest(sys, active, k)
    p = project_support(W, rest)
    clause1 = one - dot(A[k], p)
    if ar.gt(clause1, 0):
        details = (("corner below gamma_k", dot(A[k], p), one, True),)
        return ConditionReport("persistence_geometric", (k,), True, clause1, details)
    box = Cell((ar.zero(),) * n, p)
    verts_k = cell_plane_vertices(box, sys.gamma(k), ar)
    parts_a = [(f"gamma_{k} vertex vs gamma_{j}", one, dot(A[j], v)) for j in rest for v in verts_k]
    rep_a = _report("persistence_geometric", (k,), parts_a, ar)
    holds_b = True
    for j in rest:
        verts_j = cell_plane_vertices(box, sys.gamma(j), ar)
        # an empty section cannot be "below" anything
        if not verts_j or not all(ar.lt(dot(A[k], v), one) for v in verts_j):
            holds_b = False
            break
    if rep_a.holds != holds_b:
        raise CriterionDisagreement(f"persistence phrasings disagree for species {k}")
    details = (("corner below gamma_k", dot(A[k], p), one, False),) + rep_a.details
    return ConditionReport("persistence_geometric", (k,), rep_a.holds, rep_a.margin, details, rep_a.boundary)


def check_ratio_sum(sys: LVSystem, i: int) -> ConditionReport:
    """sum_j a_ij / a_jj < 2."""
    A, ar = sys.A, sys.arith
    s = sum((A[i][j] / A[j][j] for j in range(sys.n)), start=ar.zero())
    return _report("ratio_sum", (i,), [("sum", s, 2 * ar.one())], ar)


def check_pair_ratio(sys: LVSystem, i: int, j: int) -> ConditionReport:
    if i == j:
        raise ValueError("pair ratio test needs i != j")
    A, ar = sys.A, sys.arith
    zero, one = ar.zero(), ar.one()
    others = [k for k in range(sys.n) if k not in (i, j)]
    sj = sum((A[j][k] / A[k][k] for k in others), start=zero)
    si = sum((A[i][k] / A[k][k] for k in others), start=zero)
    lhs = max(zero, A[i][j] / A[j][j] * (one - sj))
    return _report("pair_ratio", (i, j), [("pair", lhs, one - si)], ar)


def check_first_species_dominance(sys: LVSystem) -> ConditionReport:
    """(i - j)(a_ij - a_jj) > 0 for all i != j: only the first species persists."""
    A, ar = sys.A, sys.arith
    parts = []
    for i, j in itertools.permutations(range(sys.n), 2):
        s = 1 if i > j else -1
        parts.append((f"({i},{j})", ar.zero(), s * (A[i][j] - A[j][j])))
    if not parts:
        parts.append(("single species", ar.zero(), ar.one()))
    return _report("first_species_dominance", (), parts, ar)


def _nonstrict(ar, label, lhs, rhs):
    return (label, lhs, rhs, ar.le(lhs, rhs))


def _mixed_report(name, indices, strict_parts, loose_parts, ar) -> ConditionReport:
    base = _report(name, indices, strict_parts, ar)
    loose = [_nonstrict(ar, *p) for p in loose_parts]
    holds = base.holds and all(p[3] for p in loose)
    slack = [rhs - lhs for _, lhs, rhs, _ in loose]
    margins = ([base.margin] if base.margin is not None else []) + slack
    margin = min(margins) if margins else ar.one()
    return ConditionReport(name, tuple(indices), holds, margin, base.details + tuple(loose), base.boundary)


def check_chain_order(sys: LVSystem, ordering: Sequence[int]) -> ConditionReport:
    """Chain dominance along ``ordering`` (first entry goes extinct first, last survives):

    a[o_j][o_l] < a[o_l][o_l] and a[o_j][o_j] <= a[o_{j-1}][o_j] <= ... <= a[o_1][o_j] for l < j.
    """
    A, ar, n = sys.A, sys.arith, sys.n
    o = list(ordering)
    if sorted(o) != list(range(n)):
        raise ValueError("ordering must be a permutation of the species")
    strict, loose = [], []
    for j in range(n):
        for l in range(j):
            strict.append((f"a[{o[j]}][{o[l]}] < a[{o[l]}][{o[l]}]", A[o[j]][o[l]], A[o[l]][o[l]]))
        for r in range(j, 0, -1):
            loose.append((f"a[{o[r]}][{o[j]}] <= a[{o[r - 1]}][{o[j]}]", A[o[r]][o[j]], A[o[r - 1]][o[j]]))
    return _mixed_report("chain_order", tuple(o), strict, loose, ar)


def extinction_step_ok(sys: LVSystem, e: int, remaining: Sequence[int]) -> bool:
    """Row ``e`` dominates on ``remaining``: a_ke < a_ee and a_kj <= a_ej for all k, j there."""
    A, ar = sys.A, sys.arith
    return all(ar.lt(A[k][e], A[e][e]) for k in remaining) and all(
        ar.le(A[k][j], A[e][j]) for k in remaining for j in remaining
    )


def check_extinction_order(sys: LVSystem, order: Sequence[int]) -> ConditionReport:
    """Successive row dominance along the extinction ``order``."""
    A, ar, n = sys.A, sys.arith, sys.n
    order = list(order)
    strict, loose = [], []
    removed: set = set()
    for e in order:
        removed.add(e)
        R = [j for j in range(n) if j not in removed]
        for k in R:
            strict.append((f"a[{k}][{e}] < a[{e}][{e}]", A[k][e], A[e][e]))
        for k in R:
            for j in R:
                loose.append((f"a[{k}][{j}] <= a[{e}][{j}]", A[k][j], A[e][j]))
    return _mixed_report("extinction_order", tuple(order), strict, loose, ar)


def find_extinction_order(sys: LVSystem, search: str = "greedy", full: bool = False) -> list | None:
    """An order of successively dominated species, or ``None``.

    ``full`` asks for n - 1 extinctions (a single survivor). Greedy is exact:
    two species can never both dominate the same remaining set.
    """
    n = sys.n
    if search == "greedy":
        remaining = list(range(n))
        order = []
        while len(remaining) > 1:
            pick = next((e for e in remaining if extinction_step_ok(sys, e, [r for r in remaining if r != e])), None)
            if pick is None:
                break
            order.append(pick)
            remaining.remove(pick)
        if full and len(order) != n - 1:
            return None
        return order
    if search == "exhaustive":
        if n > 8:
            raise ValueError("exhaustive ordering search is limited to n <= 8")
        for perm in itertools.permutations(range(n)):
            if check_chain_order(sys, perm).holds:
                return list(perm[:-1])
        return None
    raise ValueError(f"unknown search {search!r}")
