import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from lvcert.core import (
    Cell,
    LVSystem,
    ModelError,
    Plane,
    Position,
    cell_plane_vertices,
    classify_point,
    float_arith,
    project_support,
    set_position,
)

P1 = (F(0), F(2, 7), F(1, 4), F(3, 14))
P2 = (F(0), F(2, 7), F(11, 56), F(1, 4))
P3 = (F(0), F(1, 4), F(1, 4), F(1, 4))


def test_float_input_becomes_shortest_fraction():
    s = LVSystem.create([1], [[2.1]])
    assert s.A[0][0] == F(21, 10)


def test_float_mode_comparisons_use_eps():
    ar = float_arith(1e-9)
    assert ar.eq(1.0, 1.0 + 5e-10)
    assert not ar.lt(1.0, 1.0 + 5e-10)
    assert ar.lt(1.0, 1.0 + 2e-9)
    with pytest.raises(ValueError):
        float_arith(0)


@pytest.mark.parametrize(
    "b, A, fragment",
    [
        ([1], [[-1]], "A[0][0]"),
        ([1, 1], [[1, -0.5], [0, 1]], "A[0][1]"),
        ([0, 1], [[1, 0], [0, 1]], "b[0]"),
        ([1, 1], [[1, 0]], "2x2"),
        ([], [], "at least one"),
    ],
)
def test_sign_and_shape_validation(b, A, fragment):
    with pytest.raises(ModelError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        LVSystem.create(b, A)


def test_unknown_mode():
    with pytest.raises(ValueError):
        LVSystem.create([1], [[1]], mode="decimal")


def test_permuted_relabels_rows_and_columns(ex3):
    p = ex3.permuted([2, 0, 1])
    assert p.A[0] == (ex3.A[2][2], ex3.A[2][0], ex3.A[2][1])
    assert p.permuted([1, 2, 0]).A == ex3.A


def test_classify_point_examples(ex3):
    w = (F(0), F(1, 3), F(11, 57))
    assert classify_point(ex3.gamma(0), w) is Position.ON
    assert classify_point(ex3.gamma(2), w) is Position.BELOW
    for i in range(3):
        assert classify_point(ex3.gamma(i), (F(0),) * 3) is Position.BELOW
    with pytest.raises(ValueError):
        classify_point(ex3.gamma(0), (F(0),) * 2)


def test_classify_point_float_on_band():
    ar = float_arith(1e-9)
    assert classify_point(Plane((1.0, 1.0)), (0.5, 0.5 + 1e-10), ar) is Position.ON
    assert classify_point(Plane((1.0, 1.0)), (0.5, 0.5 + 1e-8), ar) is Position.ABOVE


def test_project_support():
    x = (1, 2, 3)
    assert project_support(x, [0, 2]) == (1, 0, 3)
    assert project_support(x, range(3)) == x
    assert project_support(x, []) == (0, 0, 0)


def test_triangle_vertices_of_four_species_example(ex4):
    box = Cell((F(0),) * 4, (F(0), F(2, 7), F(1, 4), F(1, 4)))
    assert cell_plane_vertices(box, ex4.gamma(0)) == sorted([P1, P2, P3])


def test_triangle_is_above_the_other_nullclines(ex4):
    for j in (1, 2, 3):
        assert set_position([P1, P2, P3], ex4.gamma(j)) is Position.ABOVE


def test_unit_square_diagonal():
    v = cell_plane_vertices(Cell((F(0), F(0)), (F(1), F(1))), Plane((F(1), F(1))))
    assert v == [(0, 1), (1, 0)]


def test_cell_below_plane_is_empty():
    assert cell_plane_vertices(Cell((F(0), F(0)), (F(1, 4), F(1, 4))), Plane((F(1), F(1)))) == []


def test_zero_coefficient_edges():
    # x_2 is free on the plane x_1 = 1/2
    v = cell_plane_vertices(Cell((F(0), F(0)), (F(1), F(1))), Plane((F(2), F(0))))
    assert v == [(F(1, 2), 0), (F(1, 2), 1)]


def test_set_position():
    plane = Plane((F(1), F(1)))
    assert set_position([(F(1, 2), F(1, 2))], plane) is Position.ON
    assert set_position([(F(0), F(0)), (F(1), F(1))], plane) is Position.MIXED
    with pytest.raises(ValueError):
        set_position([], plane)


def _vertex_oracle(lo, hi, u):
    """Vertices of {lo <= x <= hi, u.x = 1}: points where n - 1 box constraints are tight."""
    n = len(lo)
    xs = sympy.symbols(f"x0:{n}")
    out = set()
    for free in range(n):
        for choice in itertools.product((0, 1), repeat=n - 1):
            subs = {}
            others = [k for k in range(n) if k != free]
            for k, c in zip(others, choice):
                subs[xs[k]] = sympy.Rational(hi[k] if c else lo[k])
            eq = sympy.Eq(sum(sympy.Rational(u[k]) * xs[k] for k in range(n)).subs(subs), 1)
            if u[free] == 0:
                continue
            for s_ in sympy.solve(eq, xs[free], dict=True):
                val = s_[xs[free]]
                if lo[free] <= val <= hi[free]:
                    out.add(tuple(F(str(subs.get(xs[k], val))) for k in range(n)))
    return out


def test_vertices_against_symbolic_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(2, 4)
        lo = [F(rng.randint(0, 2), 4) for _ in range(n)]
        hi = [l + F(rng.randint(0, 4), 4) for l in lo]
        u = [F(rng.randint(1, 6), 2) for _ in range(n)]
        got = set(cell_plane_vertices(Cell(tuple(lo), tuple(hi)), Plane(tuple(u))))
        assert got == _vertex_oracle(lo, hi, u)


@st.composite
def cells_and_planes(draw):
    n = draw(st.integers(1, 4))
    lo = [F(draw(st.integers(0, 4)), 4) for _ in range(n)]
    hi = [l + F(draw(st.integers(0, 8)), 4) for l in lo]
    u = [F(draw(st.integers(0, 6)), 2) for _ in range(n)]
    return Cell(tuple(lo), tuple(hi)), Plane(tuple(u))


@given(cells_and_planes())
@settings(max_examples=200, deadline=None)
def test_vertices_lie_on_plane_and_in_cell(cp):
    cell, plane = cp
    verts = cell_plane_vertices(cell, plane)
    assert len(verts) == len(set(verts))
    for v in verts:
        assert plane.value(v) == 1
        assert cell.contains(v)


def _in_hull(p, verts):
    """LP feasibility: p = sum w_k v_k with w >= 0, sum w = 1."""
    V = np.array([[float(c) for c in v] for v in verts]).T
    A_eq = np.vstack([V, np.ones(V.shape[1])])
    b_eq = np.append(p, 1.0)
    res = linprog(np.zeros(V.shape[1]), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 0


@given(cells_and_planes(), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_polytope_points_are_hulled_by_vertices(cp, seed):
    cell, plane = cp
    verts = cell_plane_vertices(cell, plane)
    n = len(cell.lo)
    if not verts:
        corners = itertools.product(*zip(cell.lo, cell.hi))
        sides = {classify_point(plane, c) for c in corners}
        assert sides in ({Position.BELOW}, {Position.ABOVE})
        return
    rng = np.random.default_rng(seed)
    lo = np.array([float(v) for v in cell.lo])
    hi = np.array([float(v) for v in cell.hi])
    u = np.array([float(v) for v in plane.coeffs])
    free = [m for m in range(n) if u[m] > 0]
    hits = 0
    for _ in range(200):
        x = lo + rng.uniform(size=n) * (hi - lo)
        m = rng.choice(free)
        x[m] = (1 - u @ x + u[m] * x[m]) / u[m]
        if lo[m] - 1e-12 <= x[m] <= hi[m] + 1e-12:
            hits += 1
            assert _in_hull(x, verts)
        if hits == 10:
            break


@given(st.lists(st.integers(0, 9), min_size=1, max_size=6), st.sets(st.integers(0, 5)), st.sets(st.integers(0, 5)))
def test_project_support_idempotent_and_monotone(x, J, K):
    x = tuple(x)
    J = {j for j in J if j < len(x)}
    K = {k for k in K if k < len(x)}
    pj = project_support(x, J)
    assert project_support(pj, J) == pj
    pjk = project_support(x, J | K)
    assert all(a <= b for a, b in zip(pj, pjk))
