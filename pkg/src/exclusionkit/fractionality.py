"""
Fractionality measure of the anyon statistics parameter.

For ``n`` anyons with parameter ``alpha`` (defined mod 2) the exclusion strength
is governed by

    xi_A(alpha, n) = min_{p in 0..n-2} min_{q in Z} |(2p + 1) alpha - 2q|,

the distance from the interchange phases ``(2p+1) alpha`` to the even integers.
Rational parameters are handled exactly with :class:`fractions.Fraction`, which
doubles as the reduced-fraction type ``mu/nu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class XiAResult:
    """Minimum value and the ``(p, q)`` attaining it.

    ``value`` is a float on the floating-point path and a :class:`Fraction` on
    the rational path.
    """

    value: float | Fraction
    argmin_p: int
    argmin_q: int

    def __float__(self) -> float:
        return float(self.value)


class XiALimit(NamedTuple):
    value: Fraction
    n_stable: int


def as_fraction(alpha) -> Fraction:
    """Coerce ``alpha`` (Fraction, int, ``(mu, nu)`` pair or ``"mu/nu"``) to a reduced Fraction."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, tuple):
        mu, nu = alpha
        return Fraction(int(mu), int(nu))
    if isinstance(alpha, (int, Rational, str)):
        return Fraction(alpha)
    raise TypeError(f"cannot interpret {alpha!r} as an exact fraction")


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise DomainError(f"xi_A requires an integer n >= 2, got {n}")
    return int(n)


def xi_A(alpha: float, n: int) -> XiAResult:
    """Floating-point evaluation of the fractionality measure in O(n)."""
    n = _check_n(n)
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    odd = 2.0 * np.arange(n - 1) + 1.0
    phase = odd * alpha
    q = np.rint(0.5 * phase)
    dist = np.abs(phase - 2.0 * q)
    p = int(np.argmin(dist))
    return XiAResult(float(dist[p]), p, int(q[p]))


def xi_A_rational(frac, n: int) -> XiAResult:
    """Exact fractionality measure for rational ``alpha = mu/nu``.

    For each ``p`` the distance of ``(2p+1) mu`` to the nearest multiple of
    ``2 nu`` is computed in integers; the minimum is divided by ``nu``.
    """
    n = _check_n(n)
    a = as_fraction(frac)
    mu, nu = a.numerator, a.denominator
    period = 2 * nu
    best = None
    for p in range(n - 1):
        k = (2 * p + 1) * mu
        r = k % period
        d = min(r, period - r)
        if best is None or d < best[0]:
            q = (k - r) // period if r <= period - r else (k - r) // period + 1
            best = (d, p, q)
            if d == 0:
                break
    d, p, q = best
    return XiAResult(Fraction(d, nu), p, q)


def xi_A_limit(frac) -> XiALimit:
    """Large-``n`` limit of ``xi_A`` for rational ``alpha`` and where it is first attained.

    The limit is ``1/nu`` for odd numerator ``mu`` and 0 for even numerator.
    ``n_stable`` is the smallest ``n`` with ``xi_A_rational(frac, n)`` equal to
    the limit; since ``xi_A`` is non-increasing in ``n`` it stays there.
    """
    a = as_fraction(frac) % 2
    mu, nu = a.numerator, a.denominator
    limit = Fraction(1, nu) if mu % 2 else Fraction(0)
    period = 2 * nu
    target = 1 if mu % 2 else 0
    # odd mu: (2p+1) mu runs through all odd residues mod 2 nu within nu steps;
    # even mu: nu | (2p+1) at p = (nu - 1)/2
    for p in range(period + 1):
        r = ((2 * p + 1) * mu) % period
        if min(r, period - r) == target:
            return XiALimit(limit, p + 2)
    raise AssertionError("unreachable: limit is attained within 2*nu steps")


def wedge_envelope(alpha: Fraction | float, max_den: int) -> float:
    """Lower envelope left after cutting wedges of slope ``nu'`` at even-numerator points ``mu'/nu'``.

    Evaluates ``min nu' |alpha - mu'/nu'|`` over reduced fractions with even
    ``mu'`` and ``nu' <= max_den``. For odd-numerator ``alpha = mu/nu`` with
    ``2 nu <= max_den`` this equals ``1/nu``; at even-numerator points it is 0.
    """
    alpha = float(alpha) % 2.0
    best = math.inf
    for den in range(1, max_den + 1):
        lo = math.floor((alpha - 1.0) * den)
        hi = math.ceil((alpha + 1.0) * den)
        for num in range(lo, hi + 1):
            if num % 2 or math.gcd(num, den) != 1:
                continue
            best = min(best, abs(alpha * den - num))
    return best


def farey_grid(max_den: int, lo: Fraction = Fraction(0), hi: Fraction = Fraction(2)) -> list[Fraction]:
    """All reduced fractions in ``[lo, hi]`` with denominator ``<= max_den``, sorted."""
    out = set()
    for den in range(1, max_den + 1):
        for num in range(math.ceil(lo * den), math.floor(hi * den) + 1):
            out.add(Fraction(num, den))
    return sorted(out)
