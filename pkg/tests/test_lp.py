from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from catalysis import lp


def solve(rows, rhs):
    """Gauss-Jordan over Fractions; ``None`` when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def brute_lp(c, A, b):
    """Best objective over all basic feasible points (problem must be bounded)."""
    d = len(c)
    best = None
    for idx in combinations(range(len(A)), d):
        x = solve([A[i] for i in idx], [b[i] for i in idx])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) <= bi for row, bi in zip(A, b)):
            val = sum(ci * v for ci, v in zip(c, x))
            best = val if best is None or val > best else best
    return best


def random_bounded(rng, d):
    A, b = [], []
    for _ in range(rng.randint(1, 6)):
        A.append([Fraction(rng.randint(-4, 4)) for _ in range(d)])
        b.append(Fraction(rng.randint(-3, 6)))
    for i in range(d):
        e = [Fraction(int(j == i)) for j in range(d)]
        A.append(e)
        b.append(Fraction(rng.randint(1, 5)))
        A.append([-x for x in e])
        b.append(Fraction(rng.randint(1, 5)))
    c = [Fraction(rng.randint(-5, 5)) for _ in range(d)]
    return c, A, b


@pytest.mark.parametrize("seed", range(6))
def test_matches_vertex_brute_force(seed):
    rng = random.Random(seed)
    for _ in range(40):
        d = rng.randint(1, 3)
        c, A, b = random_bounded(rng, d)
        res = lp.maximize(c, A, b)
        truth = brute_lp(c, A, b)
        if truth is None:
            assert res.status == lp.INFEASIBLE
        else:
            assert res.status == lp.OPTIMAL and res.value == truth
            assert all(sum(a * v for a, v in zip(row, res.point)) <= bi for row, bi in zip(A, b))
            assert sum(ci * v for ci, v in zip(c, res.point)) == res.value


def test_equalities():
    # x + y = 1, x - y <= 0, maximize x  ->  x = 1/2
    res = lp.maximize([1, 0], [[1, -1]], [0], [[1, 1]], [1])
    assert res.status == lp.OPTIMAL and res.value == Fraction(1, 2)
    assert res.point == (Fraction(1, 2), Fraction(1, 2))


def test_redundant_equalities():
    res = lp.maximize([1, 1], [[1, 0]], [2], [[1, 1], [2, 2]], [3, 6])
    assert res.status == lp.OPTIMAL and res.value == 3


def test_unbounded_and_infeasible():
    assert lp.maximize([1, 0], [[0, 1]], [1]).status == lp.UNBOUNDED
    assert lp.maximize([1], [[-1]], [0]).status == lp.UNBOUNDED
    assert lp.maximize([1, 1], [[1, 0], [-1, 0]], [0, -1]).status == lp.INFEASIBLE
    assert lp.maximize([1], [[1], [-1]], [Fraction(1, 4), Fraction(-3, 4)]).status == lp.INFEASIBLE


def test_minimize_and_zero_dim():
    res = lp.minimize([1, 2], [[-1, 0], [0, -1]], [0, 0])
    assert res.value == 0
    assert lp.maximize([], [[]], [1]).status == lp.OPTIMAL
    assert lp.maximize([], [[]], [-1]).status == lp.INFEASIBLE


def test_degenerate_problem_terminates():
    # many constraints through one vertex: Bland's rule must not cycle
    A = [[1, 1], [1, 2], [2, 1], [1, 3], [3, 1], [-1, 0], [0, -1]]
    b = [0, 0, 0, 0, 0, 0, 0]
    res = lp.maximize([1, 1], A, b)
    assert res.status == lp.OPTIMAL and res.value == 0
