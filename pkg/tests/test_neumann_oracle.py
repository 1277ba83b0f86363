import math

import numpy as np
import pytest

from exclusionkit.errors import DomainError, RefinementError
from exclusionkit.exclusion_constants import xi_H, xi_S
from exclusionkit.neumann_oracle import (
    Grid1D,
    analytic_relative_eigenvalue,
    extrapolated_eigenvalue,
    fermionized_energy,
    interval_exclusion_check,
    richardson,
    solve_relative_H,
    solve_relative_S,
)


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid1D(8)
    with pytest.raises(DomainError):
        Grid1D(32, (1.0, 0.0))
    g = Grid1D(101, (0.0, 2.0))
    assert g.h == pytest.approx(0.02)


def test_S_eta_zero_is_constant_mode():
    r = solve_relative_S(0.0, 1.0)
    assert abs(r.eigenvalue) < 1e-10
    assert abs(r.eigvec_norm_check - 1) < 1e-8


def test_S_dirichlet_limit():
    assert extrapolated_eigenvalue("S", math.inf, 1.0) == pytest.approx((math.pi / 2) ** 2, rel=1e-8)


def test_S_eta_one():
    v = extrapolated_eigenvalue("S", 1.0, 1.0)
    assert v == pytest.approx(xi_S(1.0).value ** 2, rel=1e-8)
    assert v == pytest.approx(0.7401, abs=1e-4)


def test_H_alpha_one_and_two():
    assert extrapolated_eigenvalue("H", 1.0, 1.0) == pytest.approx((math.pi / 2) ** 2, rel=1e-8)
    assert extrapolated_eigenvalue("H", 2.0, 1.0) == pytest.approx(xi_H(2.0).value ** 2, rel=1e-8)


def test_H_length_scaling_example():
    assert extrapolated_eigenvalue("H", 1.0, 2.0) == pytest.approx((math.pi / 4) ** 2, rel=1e-8)


def test_errors():
    with pytest.raises(DomainError):
        solve_relative_S(-1.0, 1.0)
    with pytest.raises(DomainError):
        solve_relative_H(0.5, 1.0)


def test_cauchy_under_doubling():
    vals = [solve_relative_H(1.7, 1.0, Grid1D(n, (0, 1.0))).eigenvalue for n in (100, 200, 400, 800)]
    diffs = np.abs(np.diff(vals))
    assert np.all(diffs[1:] < diffs[:-1])


@pytest.mark.parametrize("model,param", [("S", 2.5), ("H", 3.0)])
def test_discrete_scaling_covariance(model, param):
    solve = solve_relative_S if model == "S" else solve_relative_H
    l = 2.7
    base = solve(param * l if model == "S" else param, 1.0, Grid1D(300, (0, 1.0))).eigenvalue
    scaled = solve(param, l, Grid1D(300, (0, l))).eigenvalue
    assert scaled == pytest.approx(base / l**2, rel=1e-12)


def test_richardson_exact_on_polynomial():
    hs = [0.1, 0.05, 0.025]
    vals = [3.0 + 2 * h**2 - 5 * h**4 for h in hs]
    assert richardson(vals, hs) == pytest.approx(3.0, abs=1e-13)


def test_random_samples_match_analytic():
    rng = np.random.default_rng(7)
    for _ in range(5):
        eta, l = rng.uniform(0, 10), rng.uniform(0.3, 3)
        assert extrapolated_eigenvalue("S", eta, l) == pytest.approx(analytic_relative_eigenvalue("S", eta, l), rel=1e-4)
        a, l = rng.uniform(1, 6), rng.uniform(0.3, 3)
        assert extrapolated_eigenvalue("H", a, l) == pytest.approx(analytic_relative_eigenvalue("H", a, l), rel=1e-4)


# --- n-particle checks ----------------------------------------------------------------------------

def test_free_bosons():
    r = interval_exclusion_check("S", 0.0, 2, 1.0)
    assert r.passed and r.bound == 0.0 and abs(r.E0) < 1e-9


def test_alpha_one_two_particles():
    r = interval_exclusion_check("H", 1.0, 2, 1.0)
    assert r.passed
    assert r.E0 == pytest.approx(math.pi**2 / 2, rel=1e-3)
    assert r.bound == pytest.approx(math.pi**2 / 4, rel=1e-12)


def test_alpha_one_three_particles_fermionized():
    r = interval_exclusion_check("H", 1.0, 3, 1.0, method="fermionized")
    assert r.E0 == pytest.approx(math.pi**2 / 2 + 2 * math.pi**2, rel=1e-14)
    assert r.bound == pytest.approx(2 * math.pi**2 / 4)
    assert r.passed


def test_alpha_one_three_particles_grid_converges_to_fermions():
    r = interval_exclusion_check("H", 1.0, 3, 1.0, npoints=40)
    assert r.passed
    assert r.E0 == pytest.approx(fermionized_energy(3, 1.0), rel=2e-3)


def test_three_particles_other_params():
    assert interval_exclusion_check("S", 2.0, 3, 1.0, npoints=30).passed
    assert interval_exclusion_check("H", 2.0, 3, 1.0, npoints=30).passed


def test_lemma_random_draws_n2():
    rng = np.random.default_rng(3)
    for _ in range(10):
        assert interval_exclusion_check("S", rng.uniform(0, 5), 2, rng.uniform(0.5, 2)).passed
        assert interval_exclusion_check("H", rng.uniform(1, 3), 2, rng.uniform(0.5, 2)).passed


def test_refinement_error():
    with pytest.raises(RefinementError, match="npoints >="):
        interval_exclusion_check("H", 5.0, 2, 1.0, npoints=20)


def test_check_domain_errors():
    with pytest.raises(DomainError):
        interval_exclusion_check("H", 1.0, 4)
    with pytest.raises(DomainError):
        interval_exclusion_check("S", -1.0, 2)
    with pytest.raises(DomainError):
        interval_exclusion_check("S", 1.0, 2, method="fermionized")
