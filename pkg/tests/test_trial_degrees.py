import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exclusionkit.errors import DomainError
from exclusionkit.trap import TrapSpec, chitra_sen_bound
from exclusionkit.trial_degrees import (
    TrialSpec,
    UnphysicalEnergyWarning,
    angular_momentum,
    degree,
    magic_numbers,
    predicted_energy,
    slater_degree,
    slater_exponent_fit,
    slater_local_exponent,
)


def _brute_slater(K):
    states = sorted(n for n in range(0, 200) for _ in range(n + 1))
    return sum(states[:K])


def test_spec_validation():
    with pytest.raises(DomainError):
        TrialSpec(2, 4, 1)
    with pytest.raises(DomainError):
        TrialSpec(1, 2, 0)
    with pytest.raises(DomainError):
        TrialSpec(1, 2, 1, variant="weird")


def test_even_example():
    led = degree(TrialSpec(2, 3, 2))
    assert led.total == -4
    assert led.total == led.jastrow_degree + led.edge_degree + led.slater_degree + led.phi_degree


def test_even_neighbor_energy():
    s = TrialSpec(2, 5, 4, "even", "neighbor")
    assert predicted_energy(s) == (1 + s.alpha * (s.nu - 1) / 2) * s.N


def test_fermion_odd_any_K():
    for K in range(1, 30):
        led = degree(TrialSpec(1, 1, K, "odd"))
        assert led.jastrow_degree + led.edge_degree == 0
        assert led.total == slater_degree(K)[0]


def test_partial_shell_flag():
    assert "partial_shell" in degree(TrialSpec(1, 3, 4, "odd"), exact_shell=True).flags
    assert degree(TrialSpec(1, 3, 6, "odd"), exact_shell=True).flags == ()


def test_formal_flag():
    assert "formal" in degree(TrialSpec(1, 2, 3)).flags


def test_angular_momentum_examples():
    s = TrialSpec(0, 1, 5)
    assert angular_momentum(s) == 0
    s = TrialSpec(3, 1, 4)
    assert angular_momentum(s) == -Fraction(3) * 4 * 3 / 2
    assert angular_momentum(TrialSpec(1, 2, 3)) == -6
    with pytest.raises(DomainError):
        angular_momentum(TrialSpec(1, 3, 4, "odd"))
    assert angular_momentum(TrialSpec(1, 3, 6, "odd")) == -Fraction(1, 3) * 18 * 17 / 2 + Fraction(1, 3) * 2 * 18 / 2


def test_slater_examples():
    assert slater_degree(3) == (2, True)
    assert slater_degree(1) == (0, True)
    assert slater_degree(2) == (1, False)
    for K in range(1, 300):
        assert slater_degree(K)[0] == _brute_slater(K)
    for M in range(20):
        K = (M + 1) * (M + 2) // 2
        assert slater_degree(K) == (M * (M + 1) * (M + 2) // 3, True)


def test_magic_numbers():
    assert magic_numbers(30) == [1, 3, 6, 10, 15, 21, 28]


def test_predicted_energy_fermions_match_shell_sum():
    for M in range(8):
        K = (M + 1) * (M + 2) // 2
        E = predicted_energy(TrialSpec(1, 1, K, "odd"))
        occupied = sorted(n for n in range(M + 1) for _ in range(n + 1))
        assert E == sum(n + 1 for n in occupied)
        assert E == K + M * (M + 1) * (M + 2) // 3


def test_predicted_energy_bosons():
    assert predicted_energy(TrialSpec(0, 1, 7), 3) == 21


def test_unphysical_warning():
    with pytest.warns(UnphysicalEnergyWarning):
        e = predicted_energy(TrialSpec(4, 5, 3))
    assert e < 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        predicted_energy(TrialSpec(2, 3, 3))


def test_even_closed_form_exhaustive():
    for nu in range(1, 11):
        for mu in range(0, 2 * nu + 1, 2):
            if math.gcd(mu, nu) != 1:
                continue
            for K in range(1, 51):
                s = TrialSpec(mu, nu, K)
                assert degree(s).total == -s.alpha * (nu - 1) * s.N / 2


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 30), st.integers(1, 12), st.integers(1, 40))
def test_chitra_sen_consistency(mu, nu, K):
    if math.gcd(mu, nu) != 1:
        return
    s = TrialSpec(mu, nu, K, "even", "neighbor")
    L = angular_momentum(s)
    assert chitra_sen_bound(TrapSpec(Fraction(1), s.N, s.alpha, L)) == predicted_energy(s, Fraction(1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.integers(1, 12), st.integers(1, 40), st.sampled_from(["even", "odd"]),
       st.sampled_from(["none", "parameter", "neighbor"]))
def test_ledger_closure(mu, nu, K, variant, phi):
    if math.gcd(mu, nu) != 1:
        return
    led = degree(TrialSpec(mu, nu, K, variant, phi))
    assert led.total == led.jastrow_degree + led.edge_degree + led.slater_degree + led.phi_degree
    assert all(isinstance(x, (Fraction, int)) for x in (led.jastrow_degree, led.edge_degree, led.phi_degree))


def test_slater_local_exponent_tends_to_three_halves():
    assert slater_local_exponent(140) == pytest.approx(1.5, abs=0.01)
    assert abs(slater_local_exponent(1000) - 1.5) < abs(slater_local_exponent(100) - 1.5)


def test_slater_lsq_fit_value():
    # plain least squares over magic K in [10, 1e4]; finite-size curvature biases it upward
    assert slater_exponent_fit(10, 10**4) == pytest.approx(1.5309, abs=1e-4)
    assert abs(slater_exponent_fit(10**4, 10**7) - 1.5) < 0.02
