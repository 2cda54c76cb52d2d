"""Ultimate upper and lower bounds for interior solutions.

``compute_Y`` is the carrying-capacity point, ``compute_U`` the ultimate upper
bound obtained from pairwise nullcline intersections, and ``cascade_V`` the
bound left after repeatedly discarding species whose upper bound is zero.
``refine_upper_y`` / ``refine_upper_z`` / ``refine_lower`` are the single-step
refinement operators that relate a lower bound to an upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Cell, LVSystem, Number, cell_plane_vertices, dot, project_support


@dataclass(frozen=True)
class BoundsState:
    """Ultimate bounds ``lower <= liminf x(t) <= limsup x(t) <= upper``."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("bound vectors differ in dimension")
        if any(a > b for a, b in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")

    def undetermined(self, sys: LVSystem) -> list:
        ar = sys.arith
        return [i for i, (a, b) in enumerate(zip(self.lower, self.upper)) if ar.lt(a, b)]


@dataclass(frozen=True)
class CascadeResult:
    extinct: tuple  # discovery order
    bound: tuple
    steps: tuple = field(default=(), compare=False)  # the bound computed at each pass


@dataclass(frozen=True)
class LowerBound:
    """Survival witness for one species.

    ``case == "A"`` carries the explicit gap ``delta``; ``case == "B"`` only
    certifies that some positive gap exists.
    """

    index: int
    case: str
    delta: Number | None


def compute_Y(sys: LVSystem) -> tuple:
    one = sys.arith.one()
    return tuple(one / sys.A[i][i] for i in range(sys.n))


def _active(sys: LVSystem, active: Iterable[int] | None) -> list:
    if active is None:
        return list(range(sys.n))
    act = sorted(set(active))
    if any(i < 0 or i >= sys.n for i in act):
        raise IndexError("active index out of range")
    return act


def u_branch(sys: LVSystem, i: int, active: Iterable[int] | None = None) -> int:
    """Which of the three cases defines the upper bound of species ``i``: 1 (= 1/a_ii), 2 (= 0) or 3."""
    A, ar = sys.A, sys.arith
    others = [j for j in _active(sys, active) if j != i]
    if not others:
        return 1
    if any(ar.le(A[i][i], A[j][i]) or ar.is_zero(A[i][j]) for j in others):
        return 1
    if all(ar.le(A[j][k], A[i][k]) for j in others for k in others):
        return 2
    return 3


def u_candidates(sys: LVSystem, i: int, active: Iterable[int] | None = None, include_diagonal: bool = True) -> list:
    """i-th coordinates of gamma_i meeting gamma_k inside the (x_i, x_j) coordinate plane.

    Returns ``(j, k, value)`` triples over active ``j, k != i`` with a_kj > a_ij.
    """
    A, ar = sys.A, sys.arith
    others = [j for j in _active(sys, active) if j != i]
    out = []
    for j in others:
        for k in others:
            if j == k and not include_diagonal:
                continue
            if not ar.gt(A[k][j], A[i][j]):
                continue
            den = A[i][i] * A[k][j] - A[i][j] * A[k][i]
            if not ar.gt(den, 0):
                continue
            out.append((j, k, (A[k][j] - A[i][j]) / den))
    return out


def compute_U(sys: LVSystem, active: Iterable[int] | None = None, include_diagonal: bool = True) -> tuple:
    """Ultimate upper bound on the subsystem spanned by ``active`` (inactive entries are 0).

    ``include_diagonal=False`` drops the j == k candidates from the third case;
    only useful for comparing the two readings of the pair range.
    """
    act = _active(sys, active)
    zero, one = sys.arith.zero(), sys.arith.one()
    U = [zero] * sys.n
    for i in act:
        branch = u_branch(sys, i, act)
        if branch == 1:
            U[i] = one / sys.A[i][i]
        elif branch == 2:
            U[i] = zero
        else:
            vals = [v for _, _, v in u_candidates(sys, i, act, include_diagonal)]
            U[i] = max(vals) if vals else zero
    return tuple(U)


def compute_U_simplified(sys: LVSystem) -> tuple | None:
    """Closed form of the upper bound, or ``None`` where its preconditions fail.

    Requires, for every i, a_ii > a_ji for all j, and for every j either row i
    dominating row j off the i-th column or the (i, j) intersection point being
    strictly below every other nullcline.
    """
    A, ar, n = sys.A, sys.arith, sys.n
    zero, one = ar.zero(), ar.one()
    U = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        if not all(ar.gt(A[i][i], A[j][i]) for j in others):
            return None
        for j in others:
            dominated = all(ar.ge(A[i][k], A[j][k]) for k in others)
            if dominated:
                continue
            if not ar.gt(A[j][j], A[i][j]):
                return None
            den = A[i][i] * A[j][j] - A[i][j] * A[j][i]
            if not ar.gt(den, 0):
                return None
            ok = all(
                ar.lt((A[l][i] * (A[j][j] - A[i][j]) + A[l][j] * (A[i][i] - A[j][i])) / den, one)
                for l in range(n)
                if l not in (i, j)
            )
            if not ok:
                return None
        best = zero
        if not others:
            best = one / A[i][i]
        for j in others:
            if ar.gt(A[j][j], A[i][j]):
                den = A[i][i] * A[j][j] - A[i][j] * A[j][i]
                best = max(best, (A[j][j] - A[i][j]) / den)
        U.append(best)
    return tuple(U)


def _check_lower(sys: LVSystem, xhat: Sequence[Number]) -> None:
    ar = sys.arith
    for i in range(sys.n):
        if ar.gt(dot(sys.A[i], xhat), 1) and not ar.is_zero(xhat[i]):
            raise ValueError(f"lower bound has x[{i}] > 0 although it is above nullcline {i}")


def refine_upper_y(sys: LVSystem, xhat: Sequence[Number]) -> tuple:
    """Upper bound implied by a lower bound: y_j = max(0, x_j + (1 - alpha_j.x)/a_jj)."""
    xhat = tuple(xhat)
    if len(xhat) != sys.n:
        raise ValueError("dimension mismatch")
    _check_lower(sys, xhat)
    zero, one = sys.arith.zero(), sys.arith.one()
    return tuple(max(zero, xhat[j] + (one - dot(sys.A[j], xhat)) / sys.A[j][j]) for j in range(sys.n))


def _box_pair_point(sys: LVSystem, xhat, yhat, i: int, j: int, k: int):
    """Single point of gamma_i and gamma_k inside [xhat, H] where H frees only coordinates i and j."""
    A, ar, n = sys.A, sys.arith, sys.n
    one = ar.one()
    fixed = [l for l in range(n) if l not in (i, j)]
    ci = one - sum((A[i][l] * xhat[l] for l in fixed), start=ar.zero())
    ck = one - sum((A[k][l] * xhat[l] for l in fixed), start=ar.zero())
    det = A[i][i] * A[k][j] - A[i][j] * A[k][i]
    if ar.is_zero(det):
        return None
    xi = (ci * A[k][j] - A[i][j] * ck) / det
    xj = (A[i][i] * ck - A[k][i] * ci) / det
    if ar.le(xhat[i], xi) and ar.le(xi, yhat[i]) and ar.le(xhat[j], xj) and ar.le(xj, yhat[j]):
        return xi
    return None


def _dominated_at(ar, level, vi, xi) -> bool:
    # Equality is only tolerated where x_i sits at its lower bound. A vertex
    # with x_i > xhat_i lying exactly on gamma_j is an equilibrium candidate
    # with species i present, e.g. A = [[2, 1], [0, 3/2]] whose x_1 -> 1/6.
    if ar.gt(vi, xi):
        return ar.lt(level, 1)
    return ar.le(level, 1)


def refine_upper_z(sys: LVSystem, state: BoundsState, fixed: Iterable[int] = ()) -> tuple:
    """Sharpened upper bound from a pair of bounds.

    Indices in ``fixed`` are known to converge to their lower bound and get
    upper bound equal to it. The result always lies in ``[lower, upper]``.
    """
    A, ar, n = sys.A, sys.arith, sys.n
    one = ar.one()
    xhat = tuple(state.lower)
    yhat = list(state.upper)
    for j in fixed:
        yhat[j] = xhat[j]
    yhat = tuple(yhat)
    J0 = [i for i in range(n) if ar.lt(xhat[i], yhat[i])]
    cell = Cell(xhat, yhat)
    z = []
    for i in range(n):
        if i not in J0 or J0 == [i]:
            z.append(yhat[i])
            continue
        rest = [j for j in J0 if j != i]
        x_off = project_support(xhat, [l for l in range(n) if l != i])
        if any(ar.is_zero(A[i][j]) or ar.ge(dot(A[j], x_off) + A[j][i] * yhat[i], one) for j in rest):
            z.append(yhat[i])
            continue
        verts = cell_plane_vertices(cell, sys.gamma(i), ar)
        if all(_dominated_at(ar, dot(A[j], v), v[i], xhat[i]) for v in verts for j in rest):
            z.append(xhat[i])
            continue
        vals = [p for j in rest for k in rest if (p := _box_pair_point(sys, xhat, yhat, i, j, k)) is not None]
        # no single intersection point found: keep the unrefined bound
        z.append(max(vals) if vals else yhat[i])
    return tuple(z)


def cascade_V(sys: LVSystem, include_diagonal: bool = True) -> CascadeResult:
    """Drop species whose upper bound vanishes and recompute on the rest, until nothing new vanishes."""
    active = list(range(sys.n))
    extinct: list = []
    steps = []
    while True:
        U = compute_U(sys, active, include_diagonal)
        steps.append(U)
        zeros = [i for i in active if sys.arith.is_zero(U[i])]
        if not zeros:
            return CascadeResult(tuple(extinct), U, tuple(steps))
        extinct.extend(zeros)
        active = [i for i in active if i not in zeros]


def refine_lower(sys: LVSystem, xhat: Sequence[Number], uhat: Sequence[Number], i: int) -> LowerBound | None:
    """Survival gap for species ``i`` given bounds ``xhat <= liminf <= limsup <= uhat``.

    Case A (the point xhat_i e_i + uhat off i is below gamma_i) yields the
    explicit gap. Case B (xhat below gamma_i and gamma_i cut by
    [xhat, xhat_i e_i + uhat off i] above every other undetermined nullcline)
    only certifies existence. Returns ``None`` when neither applies.
    """
    A, ar, n = sys.A, sys.arith, sys.n
    one = ar.one()
    xhat, uhat = tuple(xhat), tuple(uhat)
    if any(a > b for a, b in zip(xhat, uhat)):
        raise ValueError("need xhat <= uhat")
    J1 = [j for j in range(n) if ar.gt(uhat[j], xhat[j])]
    if i not in J1:
        raise ValueError(f"species {i} is not undetermined (uhat_i == xhat_i)")
    corner = tuple(xhat[l] if l == i else uhat[l] for l in range(n))
    u_off = project_support(uhat, [l for l in range(n) if l != i])
    delta = (one - A[i][i] * xhat[i] - dot(A[i], u_off)) / A[i][i]
    if ar.gt(delta, 0):
        return LowerBound(i, "A", delta)
    if not ar.lt(dot(A[i], xhat), one):
        return None
    verts = cell_plane_vertices(Cell(xhat, corner), sys.gamma(i), ar)
    if verts and all(ar.gt(dot(A[j], v), one) for v in verts for j in J1 if j != i):
        return LowerBound(i, "B", None)
    return None
