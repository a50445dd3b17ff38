from __future__ import annotations

from fractions import Fraction
from itertools import accumulate

import pytest
from hypothesis import assume, given, settings

from catalysis.errors import DimensionMismatch, IndistinguishableEntropy
from catalysis.majorization import (
    Comparability,
    check_proposition1,
    compare,
    majorizes,
    nogo_check,
    verify_catalysis,
    verify_supercatalysis,
)
from catalysis.rational import Cmp, make_spectrum, pad_pair, tensor, uniform

from .strategies import spectra

S = make_spectrum
PSI = S(["0.4", "0.36", "0.14", "0.1"])
PHI = S(["0.5", "0.25", "0.25", "0"])


def brute_majorizes(a, b) -> bool:
    """Direct definition, written independently of the library."""
    xa = sorted(a.values, reverse=True)
    xb = sorted(b.values, reverse=True)
    return all(sum(xa[:m]) <= sum(xb[:m]) for m in range(1, len(xa)))


def test_report_for_product_example():
    a = tensor(PSI, S(["0.65", "0.35"]))
    b = tensor(PHI, S(["0.55", "0.45"]))
    rep = majorizes(a, b)
    assert rep.result and rep.failing_index is None
    assert rep.prefix_sums_source[-1] == rep.prefix_sums_target[-1] == 1
    # .26/.275, .494/.5, .634/.6375, .76/.775, .851/.8875, .916/1, .965/1: all strict
    assert rep.tight_indices == ()
    assert rep.slack(2) == Fraction(3, 500)


def test_reverse_fails_at_first_prefix():
    rep = majorizes(PHI, PSI)
    assert not rep.result and rep.failing_index == 1


def test_forward_fails_at_second_prefix():
    rep = majorizes(PSI, PHI)
    assert rep.failing_index == 2
    assert rep.prefix_sums_source[1] == Fraction(19, 25)
    assert rep.prefix_sums_target[1] == Fraction(3, 4)


@given(spectra(min_dim=1, max_dim=6))
def test_uniform_is_majorized_by_everything(s):
    assert majorizes(uniform(s.dim), s).result


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        majorizes(PSI, S(["0.5", "0.5"]))


def test_compare_examples():
    assert compare(PSI, PHI) is Comparability.INCOMPARABLE
    assert compare(S(["0.4", "0.4", "0.1", "0.1"]), S(["0.48", "0.27", "0.25", "0"])) is Comparability.INCOMPARABLE
    assert compare(PSI, PSI) is Comparability.EQUIVALENT
    assert compare(S(["0.6", "0.4"]), S(["0.7", "0.3"])) is Comparability.SOURCE_TO_TARGET
    assert compare(S(["0.7", "0.3"]), S(["0.6", "0.4"])) is Comparability.TARGET_TO_SOURCE


def test_compare_pads():
    assert compare(S(["0.5", "0.5"]), S(["0.5", "0.5", "0"])) is Comparability.EQUIVALENT
    assert compare(S(["1/3"] * 3), S(["0.5", "0.5"])) is Comparability.SOURCE_TO_TARGET


@given(spectra(max_dim=5), spectra(max_dim=5))
def test_matches_brute_force(a, b):
    a, b = pad_pair(a, b)
    rep = majorizes(a, b)
    assert rep.result == brute_majorizes(a, b)
    assert rep.prefix_sums_source == tuple(accumulate(a.values))
    assert (rep.failing_index is None) == rep.result
    assert all(x <= y for x, y in zip(rep.prefix_sums_source, rep.prefix_sums_source[1:]))


@given(spectra(max_dim=5))
def test_reflexive_all_tight(s):
    rep = majorizes(s, s)
    assert rep.result and rep.tight_indices == tuple(range(1, s.dim))


@given(spectra(max_dim=4), spectra(max_dim=4))
def test_antisymmetric(a, b):
    a, b = pad_pair(a, b)
    if majorizes(a, b).result and majorizes(b, a).result:
        assert a == b


@settings(max_examples=200)
@given(spectra(max_dim=4), spectra(max_dim=4), spectra(max_dim=4))
def test_transitive(a, b, c):
    n = max(a.dim, b.dim, c.dim)
    a, b, c = a.pad_to(n), b.pad_to(n), c.pad_to(n)
    if majorizes(a, b).result and majorizes(b, c).result:
        assert majorizes(a, c).result


@settings(max_examples=200)
@given(spectra(max_dim=4), spectra(max_dim=4), spectra(max_dim=4))
def test_tensor_invariance(a, b, c):
    a, b = pad_pair(a, b)
    assume(majorizes(a, b).result)
    assert majorizes(tensor(a, c), tensor(b, c)).result


def test_verify_catalysis_examples():
    assert verify_catalysis(PSI, PHI, S(["0.65", "0.35"])).result
    psi = S(["0.4", "0.4", "0.1", "0.1"])
    phi1 = S(["0.5", "0.25", "0.25", "0"])
    phi2 = S(["0.48", "0.27", "0.25", "0"])
    assert verify_catalysis(psi, phi1, S(["0.625", "0.375"])).result
    assert not verify_catalysis(psi, phi2, S(["0.625", "0.375"])).result


def test_catalysis_of_incomparable_pair_is_consistent():
    assert compare(PSI, PHI) is Comparability.INCOMPARABLE
    assert verify_catalysis(PSI, PHI, S(["0.6", "0.4"])).result


def test_verify_supercatalysis():
    res = verify_supercatalysis(PSI, PHI, S(["0.65", "0.35"]), S(["0.55", "0.45"]))
    assert res.valid and res.entropy_gain_sign is Cmp.GREATER and res.reason == "ok"
    psi = S(["0.4", "0.4", "0.1", "0.1"])
    assert verify_supercatalysis(psi, PHI, S(["0.625", "0.375"]), S(["8/13", "5/13"])).valid


def test_catalysis_is_not_supercatalysis():
    chi = S(["0.65", "0.35"])
    res = verify_supercatalysis(PSI, PHI, chi, chi)
    assert not res.valid and res.entropy_gain_sign is Cmp.EQUAL
    assert res.reason == "entropy gain not strict"


def test_supercatalysis_failure_reason_names_prefix():
    res = verify_supercatalysis(PSI, PHI, S(["0.65", "0.35"]), S(["0.5", "0.5"]))
    assert not res.valid
    assert res.reason.startswith("majorization fails at prefix m=")


def test_supercatalysis_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        verify_supercatalysis(PSI, PHI, S(["0.65", "0.35"]), S(["0.5", "0.3", "0.2"]))


def test_supercatalysis_indistinguishable():
    eps = Fraction(1, 10 ** 400)
    chi = S([Fraction(1, 2) + 2 * eps, Fraction(1, 2) - 2 * eps])
    omega = S([Fraction(1, 2) + eps, Fraction(1, 2) - eps])
    comparable = S(["0.5", "0.5"]), S(["1", "0"])
    with pytest.raises(IndistinguishableEntropy):
        verify_supercatalysis(*comparable, chi, omega, max_precision_bits=256)


def test_nogo_examples():
    ng = nogo_check(S([".4", ".3", ".2", ".05", ".05"]), S([".4", ".35", ".14", ".11", "0"]))
    assert ng.forbids_2x2 and not ng.forbids_3x3 and ng.reason == "α1 = β1"
    assert not nogo_check(PSI, PHI).forbids_2x2
    same = nogo_check(PSI, PSI)
    assert same.forbids_2x2 and same.forbids_3x3
    with pytest.raises(DimensionMismatch):
        nogo_check(PSI, S(["1"]))


def test_less_entangled_final_state_example():
    res = check_proposition1(PSI, PHI, S(["0.65", "0.35"]), S(["0.55", "0.45"]))
    assert res.omega_to_chi and res.both_catalysts == (True, True)


def test_uniform_final_state_is_no_catalyst():
    res = check_proposition1(PSI, PHI, S(["0.65", "0.35"]), uniform(2))
    assert res.omega_to_chi
    assert res.both_catalysts[1] is False


def test_inheritance_hypothesis_unmet():
    res = check_proposition1(PSI, PHI, S(["0.55", "0.45"]), S(["0.65", "0.35"]))
    assert not res.omega_to_chi and res.both_catalysts is None
