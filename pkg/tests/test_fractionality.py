import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exclusionkit.errors import DomainError
from exclusionkit.fractionality import (
    as_fraction,
    farey_grid,
    wedge_envelope,
    xi_A,
    xi_A_limit,
    xi_A_rational,
)


@pytest.mark.parametrize("n", [2, 3, 10, 1000])
def test_bosons_and_fermions(n):
    assert xi_A(0.0, n).value == 0
    assert xi_A(1.0, n).value == 1


def test_two_thirds_three_anyons():
    r = xi_A(2 / 3, 3)
    assert r.value == pytest.approx(0.0, abs=1e-15)
    assert (r.argmin_p, r.argmin_q) == (1, 1)
    exact = xi_A_rational(Fraction(2, 3), 3)
    assert exact.value == 0 and isinstance(exact.value, Fraction)


def test_rational_examples():
    assert xi_A_rational((1, 2), 2).value == Fraction(1, 2)
    assert xi_A_rational(Fraction(1, 3), 1000).value == Fraction(1, 3)


def test_result_invariant():
    for a in (Fraction(3, 7), Fraction(5, 4), Fraction(11, 13)):
        r = xi_A_rational(a, 20)
        assert r.value == abs((2 * r.argmin_p + 1) * a - 2 * r.argmin_q)
        assert 0 <= r.argmin_p <= 18


def test_n_below_two():
    with pytest.raises(DomainError):
        xi_A(0.5, 1)
    with pytest.raises(DomainError):
        xi_A_rational(Fraction(1, 2), 1)


def test_nonfinite_alpha():
    with pytest.raises(DomainError):
        xi_A(math.nan, 3)


def test_as_fraction_forms():
    assert as_fraction("3/5") == Fraction(3, 5)
    assert as_fraction((4, 6)) == Fraction(2, 3)
    assert as_fraction(2) == Fraction(2)
    with pytest.raises(TypeError):
        as_fraction(0.5)


@pytest.mark.parametrize("frac,value", [((1, 1), Fraction(1)), ((2, 3), Fraction(0)), ((3, 5), Fraction(1, 5))])
def test_limit_examples(frac, value):
    assert xi_A_limit(frac).value == value


alphas = st.floats(-20, 20, allow_nan=False)
ns = st.integers(2, 60)


@settings(max_examples=200, deadline=None)
@given(alphas, ns)
def test_periodicity(a, n):
    assert xi_A(a, n).value == pytest.approx(xi_A(a + 2, n).value, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(alphas, ns)
def test_reflection(a, n):
    v = xi_A(a, n).value
    assert v == pytest.approx(xi_A(-a, n).value, abs=1e-12)
    assert v == pytest.approx(xi_A(2 - a, n).value, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(alphas, ns)
def test_monotone_in_n(a, n):
    assert xi_A(a, n + 1).value <= xi_A(a, n).value


def test_rational_float_agreement():
    for nu in range(1, 51):
        for mu in range(0, 2 * nu + 1):
            if math.gcd(mu, nu) != 1:
                continue
            for n in (2, 3, 7, 50, 200):
                f = xi_A(mu / nu, n).value
                r = xi_A_rational(Fraction(mu, nu), n).value
                assert abs(f - float(r)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(-40, 40), st.integers(1, 40), st.integers(2, 100))
def test_rational_float_agreement_property(mu, nu, n):
    a = Fraction(mu, nu)
    assert abs(xi_A(float(a), n).value - float(xi_A_rational(a, n).value)) <= 1e-12


def test_limit_consistency_nu_le_25():
    for nu in range(1, 26):
        for mu in range(0, 2 * nu):
            if math.gcd(mu, nu) != 1:
                continue
            lim = xi_A_limit(Fraction(mu, nu))
            assert lim.value == (Fraction(1, nu) if mu % 2 else 0)
            assert lim.n_stable <= 4 * nu * nu or nu == 1
            for n in range(lim.n_stable, lim.n_stable + 3 * nu + 5):
                assert xi_A_rational(Fraction(mu, nu), n).value == lim.value
            if lim.n_stable > 2:
                assert xi_A_rational(Fraction(mu, nu), lim.n_stable - 1).value != lim.value


def test_limit_reduces_mod_two():
    assert xi_A_limit(Fraction(7, 3)).value == xi_A_limit(Fraction(1, 3)).value


def test_farey_grid():
    g = farey_grid(3)
    assert g[0] == 0 and g[-1] == 2
    assert Fraction(2, 3) in g and Fraction(5, 3) in g
    assert g == sorted(set(g))


def test_wedge_envelope_matches_limit_on_farey_grid():
    for a in farey_grid(30):
        assert wedge_envelope(a, 60) == pytest.approx(float(xi_A_limit(a).value), abs=1e-12)


def test_wedge_envelope_zero_at_even_points():
    for a in (Fraction(0), Fraction(2, 3), Fraction(4, 7)):
        assert wedge_envelope(a, 10) == 0
