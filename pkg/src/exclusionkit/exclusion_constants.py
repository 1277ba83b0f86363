"""
Exclusion constants from transcendental quantization conditions.

The lowest relative-motion energy of two particles on an interval of length
``l`` with Neumann walls is ``xi**2 / l**2``. The dimensionless ``xi`` depends on
the statistics model:

* Lieb-Liniger (delta interaction, strength ``eta``): smallest root of
  ``xi * tan(xi) = eta * l`` on the branch through the origin.
* Calogero-Sutherland (inverse-square interaction, ``alpha >= 1``): first
  critical point of ``sqrt(xi) * J_{alpha - 1/2}(xi)``.
* Three-dimensional fermions in a cube: ``pi / sqrt(2)``.

Bessel functions of half-integer order are evaluated from their trigonometric
closed forms (spherical Bessel recurrences). Other orders are delegated to
:func:`scipy.special.jv`.
"""

from __future__ import annotations

import decimal
import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, RangeError, RootSearchError

DEFAULT_TOL = 1e-12

#: Largest argument accepted by :func:`bessel_j`.
BESSEL_X_MAX = 1.0e4

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RootResult:
    """A bracketed root of a scalar function.

    ``bracket`` is the initial sign-changing bracket. Roots that are known in
    closed form (e.g. ``xi_S(0)``) carry the degenerate bracket
    ``(value, value)`` and zero iterations.
    """

    value: float
    residual: float
    bracket: tuple[float, float]
    iterations: int

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class BesselOrder:
    order: float

    def __post_init__(self):
        if not math.isfinite(self.order) or self.order < 0:
            raise DomainError(f"Bessel order must be finite and >= 0, got {self.order}")

    @property
    def half_integer_index(self) -> int | None:
        """``n`` such that ``order == n + 1/2``, or None."""
        n = self.order - 0.5
        if n >= 0 and n == math.floor(n):
            return int(n)
        return None

    @property
    def is_half_integer(self) -> bool:
        return self.half_integer_index is not None


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def _spherical_jn_scalar(n: int, x: float) -> float:
    """Spherical Bessel ``j_n(x)`` for ``x > 0`` from the closed forms of ``j_0, j_1``."""
    s, c = math.sin(x), math.cos(x)
    j0 = s / x
    if n == 0:
        return j0
    j1 = s / (x * x) - c / x
    if n == 1:
        return j1
    if x >= n:
        # upward recurrence is stable for x >= n
        jm, jc = j0, j1
        for k in range(1, n):
            jm, jc = jc, (2 * k + 1) / x * jc - jm
        return jc
    # Miller's downward recurrence, normalized against whichever seed is larger
    start = n + 20 + int(math.sqrt(40.0 * n))
    jp, jc = 0.0, 1e-300
    value_n = 0.0
    for k in range(start, 0, -1):
        jm = (2 * k + 1) / x * jc - jp
        jp, jc = jc, jm
        if k - 1 == n:
            value_n = jc
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            value_n *= 1e-250
    # jc ~ j_0, jp ~ j_1 (unnormalized)
    if abs(j0) >= abs(j1):
        return value_n * (j0 / jc)
    return value_n * (j1 / jp)


def _half_integer_bessel(n: int, x: float) -> float:
    if x == 0.0:
        return 0.0
    if x < 1.0:
        # no cancellation in the series here; recurrences would overflow as x -> 0
        return _series_float(n + 0.5, x)
    return math.sqrt(2.0 * x / math.pi) * _spherical_jn_scalar(n, x)


def bessel_j(order: float | BesselOrder, x: float) -> float:
    """Bessel function of the first kind ``J_order(x)`` for ``x >= 0``.

    Half-integer orders use trigonometric closed forms; other orders call
    :func:`scipy.special.jv`.

    Raises
    ------
    DomainError
        If ``x < 0`` or the order is negative.
    RangeError
        If ``x`` exceeds :data:`BESSEL_X_MAX`.
    """
    bo = order if isinstance(order, BesselOrder) else BesselOrder(float(order))
    x = float(x)
    if not x >= 0.0:
        raise DomainError(f"bessel_j requires x >= 0, got {x}")
    if x > BESSEL_X_MAX:
        raise RangeError(f"bessel_j argument {x} exceeds supported maximum {BESSEL_X_MAX}")
    n = bo.half_integer_index
    if n is not None:
        return _half_integer_bessel(n, x)
    if x == 0.0:
        return 1.0 if bo.order == 0.0 else 0.0
    return float(special.jv(bo.order, x))


def _series_float(order: float, x: float, max_terms: int = 60) -> float:
    """Ascending series in double precision; only used for ``x < 1`` where terms do not cancel."""
    half = 0.5 * x
    term = math.exp(order * math.log(half) - math.lgamma(order + 1.0))
    total = term
    q = -half * half
    for k in range(1, max_terms):
        term *= q / (k * (k + order))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def bessel_j_series(order: float, x: float, max_terms: int = 2000) -> float:
    """Ascending power series for ``J_order(x)``, summed in extended decimal precision.

    ``J_v(x) = (x/2)^v / Gamma(v+1) * sum_k (-x^2/4)^k / (k! (v+1)_k)``. The
    terms grow to about ``exp(x)`` before decaying, so the sum is carried with
    ``x / ln(10) + 25`` significant digits; only the final value is rounded to
    double. Independent of the recurrences used by :func:`bessel_j`.
    """
    if x < 0 or order < 0:
        raise DomainError(f"series requires x >= 0 and order >= 0, got x={x}, order={order}")
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    ctx = decimal.Context(prec=25 + int(math.ceil(x / math.log(10.0))))
    q = ctx.divide(ctx.minus(ctx.power(decimal.Decimal(x), 2)), 4)
    v = decimal.Decimal(order)
    term = decimal.Decimal(1)
    total = decimal.Decimal(1)
    tiny = decimal.Decimal(10) ** -(ctx.prec - 2)
    for k in range(1, max_terms):
        term = ctx.divide(ctx.multiply(term, q), ctx.multiply(k, ctx.add(v, k)))
        total = ctx.add(total, term)
        if k > x and abs(term) <= tiny * abs(total):
            break
    prefactor = math.exp(order * math.log(0.5 * x) - math.lgamma(order + 1.0))
    return prefactor * float(total)


def bessel_j_downward(n: int, x: float) -> float:
    """``J_{n+1/2}(x)`` via Miller downward recurrence only (no upward branch).

    Independent of :func:`bessel_j`'s upward path; used to cross-check it.
    """
    if x == 0.0:
        return 0.0
    start = n + 30 + int(x) + int(math.sqrt(40.0 * (n + x)))
    jp, jc = 0.0, 1e-300
    value_n = 0.0
    for k in range(start, 0, -1):
        jm = (2 * k + 1) / x * jc - jp
        jp, jc = jc, jm
        if k - 1 == n:
            value_n = jc
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            value_n *= 1e-250
    # normalize against the closed form of j_0 (or j_1 near zeros of j_0)
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    scale = j0 / jc if abs(j0) >= abs(j1) else j1 / jp
    return math.sqrt(2.0 * x / math.pi) * value_n * scale


def _bessel_j_array(order: float, x: np.ndarray) -> np.ndarray:
    bo = BesselOrder(order)
    if bo.is_half_integer:
        return np.array([_half_integer_bessel(bo.half_integer_index, float(v)) for v in x])
    return special.jv(order, x)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def bracketed_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    maxiter: int = 400,
) -> RootResult:
    """Root of ``f`` in ``[a, b]`` by bisection with safeguarded secant steps.

    ``f(a)`` and ``f(b)`` must differ in sign. Iterates until the bracket is a
    few ulps wide, then requires ``|f(root)| <= tol``.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return RootResult(a, 0.0, (a, b), 0)
    if fb == 0.0:
        return RootResult(b, 0.0, (a, b), 0)
    if (fa > 0) == (fb > 0):
        raise RootSearchError(f"no sign change on [{a}, {b}]: f={fa}, {fb}")
    lo, hi, flo, fhi = a, b, fa, fb
    it = 0
    while it < maxiter:
        it += 1
        width = hi - lo
        if width <= 4 * _EPS * max(abs(lo), abs(hi)) or width <= 1e-300:
            break
        # secant candidate, accepted only well inside the bracket
        x = hi - fhi * (hi - lo) / (fhi - flo)
        if not (lo + 0.05 * width < x < hi - 0.05 * width) or it % 3 == 0:
            x = lo + 0.5 * width
        fx = f(x)
        if fx == 0.0:
            lo = hi = x
            flo = fhi = 0.0
            break
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    root, res = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    res = abs(res)
    if res > tol:
        raise RootSearchError(f"residual {res:.3e} exceeds tol {tol:.1e} after {it} iterations")
    return RootResult(root, res, (a, b), it)


# ---------------------------------------------------------------------------
# Lieb-Liniger constant
# ---------------------------------------------------------------------------

_XI_S_SERIES_T = 1e-10


def _xi_S_residual(t: float) -> Callable[[float], float]:
    scale = 1.0 + t

    def f(x: float) -> float:
        return (x * math.sin(x) - t * math.cos(x)) / scale

    return f


def xi_S(t: float, tol: float = DEFAULT_TOL) -> RootResult:
    """Root of ``xi * tan(xi) = t`` on ``[0, pi/2)``.

    ``xi_S(0) = 0`` (bosons) and ``xi_S(inf) = pi/2`` (fermions). The residual
    reported is that of ``(xi sin xi - t cos xi) / (1 + t)``.
    """
    t = float(t)
    if math.isnan(t) or t < 0:
        raise DomainError(f"xi_S requires t >= 0, got {t}")
    if t == 0.0:
        return RootResult(0.0, 0.0, (0.0, 0.0), 0)
    if math.isinf(t):
        half_pi = 0.5 * math.pi
        return RootResult(half_pi, 0.0, (half_pi, half_pi), 0)
    if t < _XI_S_SERIES_T:
        # xi^2 (1 + xi^2/3 + ...) = t gives xi = sqrt(t) (1 - t/6 + O(t^2)), exact in double here
        v = math.sqrt(t) * (1.0 - t / 6.0)
        return RootResult(v, abs(_xi_S_residual(t)(v)), (v, v), 0)
    # xi tan xi >= xi^2, so the root is at most sqrt(t)
    upper = min(math.sqrt(t), 0.5 * math.pi)
    return bracketed_root(_xi_S_residual(t), 0.0, upper, tol)


def xi_S_array(t, iterations: int = 80) -> np.ndarray:
    """Vectorized ``xi_S`` by bisection; agrees with :func:`xi_S` to ~1e-15."""
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < 0):
        raise DomainError("xi_S_array requires t >= 0")
    finite = np.isfinite(t)
    tf = np.where(finite, t, 0.0)
    lo = np.zeros_like(tf)
    hi = np.minimum(np.sqrt(tf), 0.5 * np.pi)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        neg = mid * np.sin(mid) - tf * np.cos(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    out = 0.5 * (lo + hi)
    small = tf < _XI_S_SERIES_T
    out = np.where(small, np.sqrt(tf) * (1.0 - tf / 6.0), out)
    return np.where(finite, out, 0.5 * np.pi)


def xi_S_approx(t):
    """``arctan(sqrt(t + 4 t^2 / pi^2))``, a close elementary approximation of ``xi_S``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        val = np.arctan(np.sqrt(t + 4.0 * t * t / np.pi**2))
    val = np.where(np.isinf(t), 0.5 * np.pi, val)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Calogero-Sutherland constant
# ---------------------------------------------------------------------------

def _xi_H_residual(alpha: float) -> Callable[[float], float]:
    # d/dx (x^{1/2} J_nu(x)) = x^{-1/2} (alpha J_nu - x J_{nu+1}),  nu = alpha - 1/2
    nu = alpha - 0.5

    def f(x: float) -> float:
        return bessel_j(nu, x) - (x / alpha) * bessel_j(nu + 1.0, x)

    return f


@functools.lru_cache(maxsize=4096)  # results are immutable; trap sweeps re-ask the same alpha
def xi_H(alpha: float, tol: float = DEFAULT_TOL, step: float = 0.25) -> RootResult:
    """Smallest positive critical point of ``sqrt(xi) * J_{alpha-1/2}(xi)``.

    The derivative is reduced by the recurrence
    ``J_nu' = (nu/x) J_nu - J_{nu+1}`` to ``J_nu(xi) - (xi/alpha) J_{nu+1}(xi)``,
    whose first sign change is located on a grid of spacing ``step`` and then
    refined.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 1.0:
        raise DomainError(f"xi_H is defined here only for alpha >= 1, got {alpha}")
    f = _xi_H_residual(alpha)
    upper = alpha + 10.0 * alpha ** (1.0 / 3.0) + 10.0
    grid = np.arange(tol, upper + step, step)
    nu = alpha - 0.5
    values = _bessel_j_array(nu, grid) - (grid / alpha) * _bessel_j_array(nu + 1.0, grid)
    neg = np.flatnonzero(values < 0)
    if neg.size == 0 or neg[0] == 0:
        raise RootSearchError(f"could not bracket xi_H({alpha}) within [{tol}, {upper}]")
    i = int(neg[0])
    return bracketed_root(f, float(grid[i - 1]), float(grid[i]), tol)


# ---------------------------------------------------------------------------
# Fermions
# ---------------------------------------------------------------------------

def xi_F() -> float:
    """Exclusion constant for spinless fermions in a cube, ``pi / sqrt(2)``."""
    return math.pi / math.sqrt(2.0)


def _sinc_second_derivative(x: float) -> float:
    return (2.0 * math.sin(x) - 2.0 * x * math.cos(x) - x * x * math.sin(x)) / x**3


def dyson_lenard_ball_root(tol: float = DEFAULT_TOL) -> RootResult:
    """Smallest positive zero of ``(d^2/dx^2)(sin x / x)`` (ball version of the fermion constant)."""
    # sinc'' is negative on (0, 1] and positive at pi
    return bracketed_root(_sinc_second_derivative, 1.0, math.pi, tol)
