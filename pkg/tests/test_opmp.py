from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest

from catalysis.errors import InvalidOrdering, NotIncomparable, TooLarge
from catalysis.majorization import Comparability, compare, verify_catalysis
from catalysis.opmp import (
    DownSet,
    Ordering,
    build_opmp,
    chi_of,
    down_set_form,
    down_sets,
    enumerate_opmps,
    enumerate_orderings,
    evaluate,
    hook_length_count,
    in_union,
    is_catalyzable,
    iter_orderings,
    params_of,
    realizable_orderings,
    realized_ordering,
    top_down_set,
)
from catalysis.rational import make_spectrum, tensor

from .strategies import random_spectrum

S = make_spectrum
PSI = S(["0.4", "0.36", "0.14", "0.1"])
PHI = S(["0.5", "0.25", "0.25", "0"])
F = Fraction


def is_linear_extension(perm, n, k):
    pos = {c: t for t, c in enumerate(perm)}
    return all(pos[(i, j)] < pos[(i + 1, j)] for i in range(n - 1) for j in range(k)) and \
        all(pos[(i, j)] < pos[(i, j + 1)] for i in range(n) for j in range(k - 1))


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)])
def test_ordering_count_matches_permutation_filter(n, k):
    cells = [(i, j) for i in range(n) for j in range(k)]
    brute = sum(is_linear_extension(p, n, k) for p in permutations(cells))
    assert brute == hook_length_count(n, k) == sum(1 for _ in iter_orderings(n, k))


@pytest.mark.parametrize("n,k,count", [(4, 2, 14), (3, 3, 42), (4, 3, 462), (5, 2, 42)])
def test_hook_length_counts(n, k, count):
    assert hook_length_count(n, k) == count
    assert len(enumerate_orderings(n, k)) == count
    assert len(set(enumerate_orderings(n, k))) == count


def test_cap():
    with pytest.raises(TooLarge):
        enumerate_orderings(4, 5)
    with pytest.raises(TooLarge):
        enumerate_opmps(PSI, PHI, 5)


def test_invalid_ordering():
    with pytest.raises(InvalidOrdering):
        Ordering(2, 2, ((0, 0), (1, 0), (0, 1)))
    with pytest.raises(InvalidOrdering):
        Ordering(2, 2, ((0, 1), (0, 0), (1, 0), (1, 1)))
    o = Ordering(2, 2, ((0, 0), (0, 1), (1, 0), (1, 1)))
    assert str(o) == "11 12 21 22" and o.position(1, 0) == 2
    assert o.prefix(2) == {(0, 0), (0, 1)}


def test_realizable_orderings_subset():
    real = realizable_orderings(PSI, 2)
    assert len(real) == 7 and len(realizable_orderings(PHI, 2)) == 7
    assert set(real) <= set(enumerate_orderings(4, 2))
    rng = random.Random(1)
    for _ in range(50):
        p = F(rng.randint(501, 999), 1000)
        assert realized_ordering(PSI, (p,)) in real


def test_parameterization_round_trip():
    chi = S(["0.5", "0.3", "0.2"])
    assert params_of(chi) == (F(1, 2), F(3, 10))
    assert chi_of(params_of(chi)) == chi


def test_down_sets():
    table = down_sets(4, 2)
    assert sum(len(v) for v in table.values()) == 15  # C(6, 2)
    assert all(ds.size == m for m, v in table.items() for ds in v)
    assert DownSet((2, 1)).contains(DownSet((1, 1)))
    assert not DownSet((2, 0)).contains(DownSet((1, 1)))


def test_top_sum_equals_max_over_down_sets():
    rng = random.Random(3)
    for _ in range(30):
        alpha = random_spectrum(rng, 4, 20)
        k = rng.randint(2, 3)
        chi = random_spectrum(rng, k, 20)
        point = params_of(chi)
        prod = tensor(alpha, chi).values
        for m in range(1, 4 * k):
            best = max(evaluate(down_set_form(alpha, ds), point) for ds in down_sets(4, k)[m])
            assert best == sum(prod[:m])
            assert evaluate(down_set_form(alpha, top_down_set(alpha, point, m)), point) == best


def test_literal_cells_for_product_example():
    cells = enumerate_opmps(PSI, PHI, 2, coalesce=False)
    assert [o.interval() for o in cells] == [(F(13, 25), F(10, 19)), (F(10, 19), F(7, 12)), (F(7, 12), F(25, 38))]


def test_coalesced_cells_for_product_example():
    cells = enumerate_opmps(PSI, PHI, 2)
    assert [o.interval() for o in cells] == [(F(13, 25), F(10, 19)), (F(10, 19), F(25, 38))]
    assert all(o.dim == 1 for o in cells)
    assert in_union(cells, (F(13, 20),)) and not in_union(cells, (F(7, 10),))


def test_literal_cells_respect_their_orderings():
    for o in enumerate_opmps(PSI, PHI, 2, coalesce=False):
        x = o.polyhedron.interior_point
        assert realized_ordering(PSI, x) == o.source_ordering
        assert realized_ordering(PHI, x) == o.target_ordering


def test_build_opmp_direct():
    src = realized_ordering(PSI, (F(3, 5),))
    tgt = realized_ordering(PHI, (F(3, 5),))
    o = build_opmp(PSI, PHI, 2, src, tgt)
    assert o.interval() == (F(7, 12), F(25, 38)) and o.contains((F(3, 5),))


def test_coalesced_cells_fix_top_down_sets():
    for o in enumerate_opmps(PSI, PHI, 2):
        for v in list(o.vertices) + [o.polyhedron.interior_point]:
            for m, ds in o.fixed_prefixes:
                assert evaluate(down_set_form(PSI, ds), v) == \
                    evaluate(down_set_form(PSI, top_down_set(PSI, v, m)), v)


def test_vertices_are_catalysts():
    for coalesce in (True, False):
        for o in enumerate_opmps(PSI, PHI, 2, coalesce=coalesce):
            for v in o.vertices:
                assert verify_catalysis(PSI, PHI, chi_of(v)).result
            assert verify_catalysis(PSI, PHI, o.sample_catalyst()).result


def test_union_matches_pointwise_check_k3():
    cells = enumerate_opmps(PSI, PHI, 3)
    r = 30
    for a in range(r + 1):
        for b in range(r + 1 - a):
            c = r - a - b
            if a >= b >= c:
                chi = S([F(a, r), F(b, r), F(c, r)])
                assert in_union(cells, params_of(chi)) == verify_catalysis(PSI, PHI, chi).result


def test_comparable_pair_gives_whole_simplex():
    cells = enumerate_opmps(S(["0.6", "0.4"]), S(["0.7", "0.3"]), 2)
    lo = min(o.interval()[0] for o in cells)
    hi = max(o.interval()[1] for o in cells)
    assert (lo, hi) == (F(1, 2), 1)


def test_two_step_pair_contains_five_eighths():
    cells = enumerate_opmps(S([".4", ".4", ".1", ".1"]), PHI, 2)
    assert in_union(cells, (F(5, 8),))


@pytest.mark.xfail(strict=True, reason="the stated catalyst (8/13, 5/13) fails the m=2 prefix for this pair; "
                                       "no catalyst of dimension 2 exists")
def test_second_target_catalyzed_by_eight_thirteenths():
    cells = enumerate_opmps(S([".4", ".4", ".1", ".1"]), S([".48", ".27", ".25", "0"]), 2)
    assert in_union(cells, (F(8, 13),))


def test_is_catalyzable():
    res = is_catalyzable(PSI, PHI, 2)
    assert res.catalyzable and verify_catalysis(PSI, PHI, res.witness).result
    assert not res.degenerate
    assert not is_catalyzable(PSI, PHI, 1).catalyzable
    with pytest.raises(NotIncomparable):
        is_catalyzable(S(["0.6", "0.4"]), S(["0.7", "0.3"]), 2)


def test_five_level_pair():
    psi = S([".4", ".3", ".2", ".05", ".05"])
    phi = S([".4", ".35", ".14", ".11", "0"])
    assert verify_catalysis(psi, phi, S(["0.6", "0.4"])).result
    cells = enumerate_opmps(psi, phi, 2)
    assert in_union(cells, (F(3, 5),))


def test_random_pairs_agree_with_pointwise_check():
    rng = random.Random(7)
    tried = 0
    while tried < 6:
        psi, phi = random_spectrum(rng, 3, 12), random_spectrum(rng, 3, 12)
        if compare(psi, phi) is not Comparability.INCOMPARABLE:
            continue
        tried += 1
        cells = enumerate_opmps(psi, phi, 2)
        for i in range(50, 101):
            p = F(i, 100)
            assert in_union(cells, (p,)) == verify_catalysis(psi, phi, S([p, 1 - p])).result
