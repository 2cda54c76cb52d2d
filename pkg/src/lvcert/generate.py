"""Seeded random competitive systems on small rational grids (for sweeps and tests)."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import LVSystem

HALF_GRID = tuple(Fraction(k, 2) for k in range(7))  # 0, 1/2, ..., 3


def random_system(rng: random.Random, n: int, off=HALF_GRID, diag=HALF_GRID[2:], b_grid=None) -> LVSystem:
    A = [[rng.choice(diag) if i == j else rng.choice(off) for j in range(n)] for i in range(n)]
    b = [rng.choice(b_grid) for _ in range(n)] if b_grid else [1] * n
    return LVSystem.create(b, A)


def mixed_system(rng: random.Random, n: int) -> LVSystem:
    """Half of the draws are diagonally dominant (large diagonal, small off-diagonal)."""
    if rng.random() < 0.5:
        return random_system(rng, n, off=HALF_GRID[:3], diag=tuple(Fraction(k) for k in (2, 3, 4)))
    return random_system(rng, n)


def ratio_sum_system(rng: random.Random, n: int, max_tries: int = 10_000) -> LVSystem:
    """A system with sum_j a_ij / a_jj < 2 for every row, by rejection per row."""
    diag = [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(n)]
    A = []
    for i in range(n):
        for _ in range(max_tries):
            row = [diag[j] if j == i else diag[j] * Fraction(rng.randint(0, 8), 8 * (n - 1)) * rng.choice((1, 1, 2)) for j in range(n)]
            if sum(row[j] / diag[j] for j in range(n)) < 2:
                A.append(row)
                break
        else:
            raise RuntimeError("could not draw a row")
    return LVSystem.create([1] * n, A)


def random_growth(rng: random.Random, n: int) -> list:
    return [Fraction(rng.randint(1, 40), rng.randint(1, 12)) for _ in range(n)]
