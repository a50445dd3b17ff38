from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catalysis.errors import DimensionMismatch, DimensionTooHigh, Unbounded
from catalysis.polyhedra import (
    HalfspaceSystem,
    Tag,
    affine_rank,
    contains,
    eq,
    feasibility,
    ge,
    intersect,
    le,
    polyhedron,
    rank,
    vertices,
)

from .test_lp import solve


def interval_system(lo, hi):
    return HalfspaceSystem(1, (ge([1], lo, Tag("simplex", 1)), le([1], hi, Tag("simplex", 2))))


def test_feasibility_examples():
    s = HalfspaceSystem(1, (ge([1], Fraction(1, 2)), le([1], 1), le([Fraction("0.4") - Fraction("0.5")], 0)))
    f = feasibility(s)
    assert f.feasible and s.holds(f.witness)
    assert not feasibility(interval_system(Fraction(3, 4), Fraction(1, 4))).feasible


def test_empty_polyhedron():
    p = polyhedron(interval_system(Fraction(3, 4), Fraction(1, 4)))
    assert not p.feasible and p.dim == -1 and vertices(p) == []


def test_interval_vertices():
    p = polyhedron(interval_system(Fraction(10, 19), Fraction(25, 38)))
    assert p.dim == 1
    assert vertices(p) == [(Fraction(10, 19),), (Fraction(25, 38),)]
    assert p.interval() == (Fraction(10, 19), Fraction(25, 38))
    point = polyhedron(interval_system(Fraction(1, 2), Fraction(1, 2)))
    assert point.dim == 0 and vertices(point) == [(Fraction(1, 2),)]


def test_ordered_simplex_corners():
    # p1 >= p2 >= 1 - p1 - p2 >= 0
    s = HalfspaceSystem(2, (le([-1, 1], 0), le([-1, -2], -1), le([1, 1], 1)))
    p = polyhedron(s)
    assert p.dim == 2
    assert set(vertices(p)) == {(1, 0), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 3))}
    assert contains(p, p.interior_point)


def test_lower_dimensional():
    s = HalfspaceSystem(3, (eq([1, 1, 1], 1), ge([1, 0, 0], 0), ge([0, 1, 0], 0), ge([0, 0, 1], 0)))
    p = polyhedron(s)
    assert p.dim == 2 and len(vertices(p)) == 3
    # the same triangle written with two opposite inequalities instead of an equality
    s2 = HalfspaceSystem(3, (le([1, 1, 1], 1), ge([1, 1, 1], 1)) + s.rows[1:])
    assert polyhedron(s2).dim == 2
    assert set(vertices(polyhedron(s2))) == set(vertices(p))


def test_unbounded_and_high_dimension():
    half = HalfspaceSystem(2, (ge([1, 0], 0),))
    p = polyhedron(half)
    assert p.feasible and not p.bounded and p.dim == 2
    with pytest.raises(Unbounded):
        vertices(p)
    cube = HalfspaceSystem(5, tuple(le([int(i == j) for j in range(5)], 1) for i in range(5))
                           + tuple(ge([int(i == j) for j in range(5)], 0) for i in range(5)))
    big = polyhedron(cube)
    assert big.dim == 5 and big.vertices is None and contains(big, big.interior_point)
    with pytest.raises(DimensionTooHigh):
        vertices(big)


def test_interior_point_strictness_on_lower_dim():
    s = HalfspaceSystem(6, (eq([1] * 6, 1),) + tuple(ge([int(i == j) for j in range(6)], 0) for i in range(6)))
    p = polyhedron(s)
    assert p.dim == 5
    assert all(x > 0 for x in p.interior_point) and sum(p.interior_point) == 1


def test_intersect_and_contains():
    a = interval_system(0, 1)
    b = HalfspaceSystem(1, (le([2], 1, Tag("majorization", 1)),))
    both = intersect(a, b)
    assert both.rows == a.rows + b.rows
    assert intersect(a, HalfspaceSystem(1)) == a
    with pytest.raises(DimensionMismatch):
        intersect(a, HalfspaceSystem(2))
    p = polyhedron(both)
    assert contains(p, [Fraction(1, 2)]) and not contains(p, [Fraction(3, 4)])
    with pytest.raises(DimensionMismatch):
        contains(p, [0, 0])


def test_canonical_key_ignores_scaling_and_order():
    a = HalfspaceSystem(2, (le([1, 2], 3), le([-1, 0], 0)))
    b = HalfspaceSystem(2, (le([-3, 0], 0), le([2, 4], 6), le([0, 0], 1)))
    assert a.canonical_key() == b.canonical_key()
    assert len(b.deduplicated()) == 2


def test_rank_helpers():
    assert rank([[1, 2], [2, 4]]) == 1
    assert affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_rank([(0, 0)]) == 0


def random_polytope(rng, d):
    rows = [le([rng.randint(-3, 3) for _ in range(d)], rng.randint(0, 5)) for _ in range(rng.randint(d, 8))]
    for i in range(d):
        rows.append(le([int(j == i) for j in range(d)], 3))
        rows.append(ge([int(j == i) for j in range(d)], -3))
    return HalfspaceSystem(d, tuple(rows))


def brute_vertices(system):
    from itertools import combinations

    d = system.ambient_dim
    out = set()
    for idx in combinations(system.rows, d):
        x = solve([r.coeffs for r in idx], [r.rhs for r in idx])
        if x is not None and system.holds(x):
            out.add(tuple(x))
    return out


@pytest.mark.parametrize("seed", range(4))
def test_vertices_match_brute_force(seed):
    rng = random.Random(seed)
    for _ in range(15):
        system = random_polytope(rng, rng.randint(2, 4))
        p = polyhedron(system)
        assert set(vertices(p)) == brute_vertices(system)


@pytest.mark.parametrize("seed", range(3))
def test_vertex_properties(seed):
    rng = random.Random(100 + seed)
    for _ in range(10):
        system = random_polytope(rng, rng.randint(2, 3))
        p = polyhedron(system)
        for v in vertices(p):
            assert contains(p, v)
            tight = [r for r in system.rows if r.lhs(v) == r.rhs]
            assert rank([r.coeffs for r in tight]) == system.ambient_dim
            r = tight[0]
            out = tuple(x + Fraction(1, 1000) * c for x, c in zip(v, r.coeffs))
            assert not contains(p, out)


@settings(max_examples=40, deadline=None)
@given(st.fractions(-2, 2, max_denominator=20), st.fractions(-2, 2, max_denominator=20),
       st.lists(st.fractions(0, 1, max_denominator=50), min_size=20, max_size=100))
def test_one_dimensional_interval(lo, hi, samples):
    system = interval_system(lo, hi)
    p = polyhedron(system)
    grid = [lo + (hi - lo) * t for t in samples] if lo <= hi else []
    if lo > hi:
        assert not p.feasible
        return
    assert vertices(p) == ([(lo,)] if lo == hi else [(lo,), (hi,)])
    assert all(contains(p, [x]) for x in grid)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-6, 6)), min_size=1, max_size=6))
def test_one_dimensional_feasibility_matches_grid(rows):
    system = HalfspaceSystem(1, tuple(le([a], b) for a, b in rows))
    grid = [Fraction(i, 12) for i in range(-12 * 8, 12 * 8 + 1)]
    hit = any(system.holds([x]) for x in grid)
    f = feasibility(system)
    # every bound is a multiple of 1/6 within [-6, 6], so the grid sees any feasible point
    assert f.feasible == hit
    if f.feasible:
        assert system.holds(f.witness)
