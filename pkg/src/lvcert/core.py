"""Scalars, the competitive Lotka-Volterra model, and plane/box geometry.

Two arithmetic modes are supported. Exact mode stores every coefficient as a
``Fraction`` and decides every comparison exactly. Float mode stores floats
and compares with a single tolerance ``eps``: ``x < y`` means ``x < y - eps``
and ``x == y`` means ``|x - y| <= eps``. A system fixes its mode at
construction and every derived quantity inherits it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[Fraction, float]
Vec = tuple  # tuple of Number, all nonnegative

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Arith:
    """Comparison layer. ``eps is None`` selects exact rational arithmetic."""

    eps: float | None = None

    @property
    def exact(self) -> bool:
        return self.eps is None

    @property
    def mode(self) -> str:
        return "rational" if self.exact else "float"

    def coerce(self, v) -> Number:
        if self.exact:
            if isinstance(v, Fraction):
                return v
            if isinstance(v, float):
                # shortest repr, so 2.1 becomes 21/10 rather than its binary expansion
                return Fraction(repr(v))
            if isinstance(v, str):
                return Fraction(v.strip())
            return Fraction(v)
        if isinstance(v, str):
            return float(Fraction(v.strip()))
        return float(v)

    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Number:
        return Fraction(1) if self.exact else 1.0

    def cmp(self, x: Number, y: Number) -> int:
        d = x - y
        if self.exact:
            return (d > 0) - (d < 0)
        if abs(d) <= self.eps:
            return 0
        return 1 if d > 0 else -1

    def lt(self, x, y) -> bool:
        return self.cmp(x, y) < 0

    def le(self, x, y) -> bool:
        return self.cmp(x, y) <= 0

    def gt(self, x, y) -> bool:
        return self.cmp(x, y) > 0

    def ge(self, x, y) -> bool:
        return self.cmp(x, y) >= 0

    def eq(self, x, y) -> bool:
        return self.cmp(x, y) == 0

    def is_zero(self, x) -> bool:
        return self.cmp(x, 0) == 0

    def vec_eq(self, u: Sequence[Number], v: Sequence[Number]) -> bool:
        return len(u) == len(v) and all(self.eq(a, b) for a, b in zip(u, v))


EXACT = Arith()


def float_arith(eps: float = DEFAULT_EPS) -> Arith:
    if not eps > 0:
        raise ValueError("eps must be positive")
    return Arith(eps=float(eps))


def dot(u: Sequence[Number], x: Sequence[Number]) -> Number:
    return sum((a * b for a, b in zip(u, x)), start=type(u[0])(0) if u else 0)


class ModelError(ValueError):
    """Raised when a system violates the competitive sign constraints or has a bad shape."""


@dataclass(frozen=True)
class LVSystem:
    """x_i' = b_i x_i (1 - alpha_i . x) with b > 0, a_ii > 0, a_ij >= 0.

    Row ``A[i]`` is the covector alpha_i. Indices are 0-based.
    """

    b: tuple
    A: tuple
    arith: Arith = EXACT
    name: str = ""

    def __post_init__(self):
        n = len(self.b)
        if n < 1:
            raise ModelError("need at least one species")
        if len(self.A) != n or any(len(row) != n for row in self.A):
            raise ModelError(f"A must be {n}x{n} to match b")
        for i, bi in enumerate(self.b):
            if not bi > 0:
                raise ModelError(f"b[{i}] = {bi} must be positive")
        for i, row in enumerate(self.A):
            for j, a in enumerate(row):
                if i == j and not a > 0:
                    raise ModelError(f"A[{i}][{i}] = {a} must be positive")
                if i != j and a < 0:
                    raise ModelError(f"A[{i}][{j}] = {a} must be nonnegative")

    @classmethod
    def create(cls, b, A, mode: str = "rational", eps: float = DEFAULT_EPS, name: str = "") -> "LVSystem":
        if mode == "rational":
            ar = EXACT
        elif mode == "float":
            ar = float_arith(eps)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        try:
            bb = tuple(ar.coerce(v) for v in b)
            AA = tuple(tuple(ar.coerce(v) for v in row) for row in A)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ModelError(f"bad coefficient: {exc}") from exc
        return cls(bb, AA, ar, name)

    @property
    def n(self) -> int:
        return len(self.b)

    def alpha(self, i: int) -> tuple:
        return self.A[i]

    def gamma(self, i: int) -> "Plane":
        return Plane(self.A[i])

    def with_growth(self, b) -> "LVSystem":
        return LVSystem(tuple(self.arith.coerce(v) for v in b), self.A, self.arith, self.name)

    def permuted(self, perm: Sequence[int]) -> "LVSystem":
        """Relabel species: new species ``p`` is old species ``perm[p]``."""
        b = tuple(self.b[p] for p in perm)
        A = tuple(tuple(self.A[p][q] for q in perm) for p in perm)
        return LVSystem(b, A, self.arith, self.name)

    def as_float(self, eps: float = DEFAULT_EPS) -> "LVSystem":
        ar = float_arith(eps)
        return LVSystem(
            tuple(float(v) for v in self.b),
            tuple(tuple(float(v) for v in row) for row in self.A),
            ar,
            self.name,
        )


def check_vec(x: Sequence[Number], n: int | None = None) -> tuple:
    x = tuple(x)
    if n is not None and len(x) != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {len(x)}")
    if any(v < 0 for v in x):
        raise ValueError("vector must be nonnegative")
    return x


def project_support(x: Sequence[Number], J: Iterable[int]) -> tuple:
    """Keep the coordinates in ``J`` and zero the rest."""
    keep = set(J)
    zero = type(x[0])(0) if len(x) else 0
    return tuple(v if i in keep else zero for i, v in enumerate(x))


@dataclass(frozen=True)
class Cell:
    """Axis-aligned box ``[lo, hi]`` in the nonnegative orthant."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("cell corners differ in dimension")
        if any(a < 0 for a in self.lo) or any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("cell needs 0 <= lo <= hi")

    def contains(self, x: Sequence[Number], arith: Arith = EXACT) -> bool:
        return all(arith.le(a, v) and arith.le(v, b) for a, v, b in zip(self.lo, x, self.hi))


@dataclass(frozen=True)
class Plane:
    """The set ``{x >= 0 : coeffs . x = 1}``."""

    coeffs: tuple

    def value(self, x: Sequence[Number]) -> Number:
        return dot(self.coeffs, x)


class Position(Enum):
    BELOW = "below"
    ON = "on"
    ABOVE = "above"
    MIXED = "mixed"


def classify_point(plane: Plane, x: Sequence[Number], arith: Arith = EXACT) -> Position:
    if len(x) != len(plane.coeffs):
        raise ValueError(f"dimension mismatch: plane has {len(plane.coeffs)} coefficients, point has {len(x)}")
    c = arith.cmp(plane.value(x), 1)
    if c < 0:
        return Position.BELOW
    if c > 0:
        return Position.ABOVE
    return Position.ON


def cell_plane_vertices(cell: Cell, plane: Plane, arith: Arith = EXACT) -> list:
    """Vertices of the polytope ``{x in cell : u.x = 1}``.

    Every vertex of a hyperplane section of a box lies on a box edge, so the
    plane is intersected with each of the n * 2^(n-1) edges.
    """
    lo, hi, u = cell.lo, cell.hi, plane.coeffs
    n = len(lo)
    if len(u) != n:
        raise ValueError("dimension mismatch between cell and plane")
    one = arith.one()
    found = []
    for m in range(n):
        others = [k for k in range(n) if k != m]
        for corner in itertools.product((False, True), repeat=n - 1):
            pt = list(lo)
            for k, up in zip(others, corner):
                if up:
                    pt[k] = hi[k]
            rest = sum((u[k] * pt[k] for k in others), start=arith.zero())
            if u[m] == 0:
                if arith.eq(rest, one):
                    found.append(tuple(pt))
                    pt[m] = hi[m]
                    found.append(tuple(pt))
                continue
            t = (one - rest) / u[m]
            if arith.le(lo[m], t) and arith.le(t, hi[m]):
                if not arith.exact:
                    t = min(max(t, lo[m]), hi[m])
                pt[m] = t
                found.append(tuple(pt))
    return _dedupe(found, arith)


def _dedupe(points: list, arith: Arith) -> list:
    if arith.exact:
        return sorted(set(points))
    out: list = []
    for p in points:
        if not any(all(abs(a - b) <= arith.eps for a, b in zip(p, q)) for q in out):
            out.append(p)
    return sorted(out)


def set_position(vertices: Sequence[Sequence[Number]], plane: Plane, arith: Arith = EXACT) -> Position:
    """Position of a convex set, given by its vertices, relative to a plane."""
    if not vertices:
        raise ValueError("empty vertex list")
    seen = {classify_point(plane, v, arith) for v in vertices}
    if len(seen) == 1:
        return seen.pop()
    return Position.MIXED
