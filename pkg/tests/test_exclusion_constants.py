import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exclusionkit.errors import DomainError, RangeError
from exclusionkit.exclusion_constants import (
    BESSEL_X_MAX,
    BesselOrder,
    bessel_j,
    bessel_j_downward,
    bessel_j_series,
    bracketed_root,
    dyson_lenard_ball_root,
    xi_F,
    xi_H,
    xi_S,
    xi_S_approx,
    xi_S_array,
)


# --- Bessel ---------------------------------------------------------------------------------------

def test_half_order_zero_at_pi():
    assert abs(bessel_j(0.5, math.pi)) < 1e-15


def test_order_zero_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(2.5, 0.0) == 0.0


def test_three_halves_at_two_series_vs_downward():
    a = bessel_j_series(1.5, 2.0)
    b = bessel_j_downward(1, 2.0)
    assert abs(a - b) < 1e-10
    assert abs(bessel_j(1.5, 2.0) - a) < 1e-12


def test_order_flags():
    assert BesselOrder(2.5).half_integer_index == 2
    assert BesselOrder(2.5).is_half_integer
    assert not BesselOrder(1.0).is_half_integer
    with pytest.raises(DomainError):
        BesselOrder(-1.0)


def test_bessel_errors():
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)
    with pytest.raises(RangeError):
        bessel_j(0.5, BESSEL_X_MAX * 2)


@pytest.mark.parametrize("n", range(6))
def test_half_integer_vs_series_on_0_50(n):
    xs = np.linspace(0.01, 50.0, 300)
    err = max(abs(bessel_j(n + 0.5, x) - bessel_j_series(n + 0.5, x)) for x in xs)
    assert err <= 1e-10


@pytest.mark.parametrize("order,x", [(0.5, 3.3), (7.5, 0.4), (12.5, 5.0), (30.5, 200.0), (99.5, 110.0), (1.0, 7.0),
                                     (2.37, 150.0)])
def test_bessel_against_mpmath(order, x):
    assert abs(bessel_j(order, x) - float(mpmath.besselj(order, x))) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.floats(0.0, 200.0))
def test_bessel_half_integer_property_vs_mpmath(n, x):
    assert abs(bessel_j(n + 0.5, x) - float(mpmath.besselj(n + 0.5, x))) <= 1e-12


# --- root finder ----------------------------------------------------------------------------------

def test_bracketed_root_contract():
    r = bracketed_root(lambda x: x * x - 2.0, 0.0, 2.0)
    assert r.bracket[0] < r.value < r.bracket[1]
    assert r.residual <= 1e-12
    assert abs(r.value - math.sqrt(2.0)) < 1e-14


# --- xi_S -----------------------------------------------------------------------------------------

def test_xi_S_endpoints():
    assert xi_S(0.0).value == 0.0
    assert xi_S(math.inf).value == math.pi / 2


def test_xi_S_one():
    r = xi_S(1.0)
    assert abs(r.value - 0.8603335890193797) < 1e-13
    assert abs(r.value * math.tan(r.value) - 1.0) < 1e-11


def test_xi_S_negative():
    with pytest.raises(DomainError):
        xi_S(-0.1)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1e6), st.floats(0.0, 1e6))
def test_xi_S_monotone(t1, t2):
    if t1 == t2:
        return
    lo, hi = sorted((t1, t2))
    assert xi_S(lo).value <= xi_S(hi).value
    if hi - lo > 1e-6 * (1 + hi) and hi < 1e6:
        assert xi_S(lo).value < xi_S(hi).value


def test_xi_S_monotone_1000_pairs():
    rng = np.random.default_rng(1)
    pairs = np.sort(rng.uniform(0, 100, (1000, 2)), axis=1)
    for a, b in pairs:
        if a < b:
            assert xi_S(a).value < xi_S(b).value


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1e8))
def test_xi_S_residual_contract(t):
    r = xi_S(t)
    assert r.residual <= 1e-12
    assert 0 <= r.value < math.pi / 2 or t == math.inf


def test_xi_S_array_matches_scalar():
    t = np.array([0.0, 0.3, 1.0, 10.0, 1e4, np.inf])
    np.testing.assert_allclose(xi_S_array(t), [xi_S(v).value for v in t], atol=1e-14)


def test_approx_endpoints_and_one():
    assert xi_S_approx(0.0) == 0.0
    assert abs(xi_S_approx(1e12) - math.pi / 2) < 1e-5
    assert xi_S_approx(1.0) == pytest.approx(math.atan(math.sqrt(1 + 4 / math.pi**2)), abs=1e-15)


def test_fig1_approximation_quality():
    t = np.linspace(0.0, 100.0, 10_000)
    assert np.max(np.abs(xi_S_array(t) - xi_S_approx(t))) <= 0.05


# --- xi_H -----------------------------------------------------------------------------------------

def test_xi_H_one():
    assert abs(xi_H(1.0).value - math.pi / 2) <= 1e-10


def test_xi_H_two_closed_form():
    v = xi_H(2.0).value
    assert abs(math.tan(v) - v / (1 - v * v)) < 1e-9
    assert abs(v - 2.74) < 0.01


def test_xi_H_hundred_window():
    assert 1.0 < xi_H(100.0).value / 100 < 1.2


def test_xi_H_increasing():
    vals = [xi_H(float(a)).value for a in range(1, 51)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_xi_H_derivative_vanishes():
    for alpha in (1.3, 4.0, 17.25):
        v = xi_H(alpha).value
        f = lambda x: float(mpmath.sqrt(x) * mpmath.besselj(alpha - 0.5, x))
        d = float(mpmath.diff(f, v))
        assert abs(d) < 1e-9


def test_xi_H_below_one_refused():
    with pytest.raises(DomainError):
        xi_H(0.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 60.0))
def test_xi_H_residual(alpha):
    r = xi_H(alpha)
    assert r.residual <= 1e-12
    assert r.bracket[0] < r.value < r.bracket[1]


# --- xi_F and ball root ---------------------------------------------------------------------------

def test_xi_F():
    assert xi_F() == math.pi / math.sqrt(2)
    assert abs(xi_F() - 2.221441469079183) < 1e-15


def test_ball_root():
    r = dyson_lenard_ball_root()
    assert 0 < r.value < math.pi
    assert r.residual <= 1e-12
    f = lambda x: float(mpmath.diff(lambda y: mpmath.sin(y) / y, x, 2))
    assert abs(f(r.value)) < 1e-12
    # smallest positive root: no sign change on (0, value)
    xs = np.linspace(1e-3, r.value * (1 - 1e-6), 2000)
    assert all(f(x) < 0 for x in xs[::50])
