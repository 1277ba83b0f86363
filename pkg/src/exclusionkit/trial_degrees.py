"""
Degree and angular-momentum calculus for the grouped Jastrow trial states.

``N = nu K`` particles are split into ``nu`` groups of ``K``. The non-Gaussian
part of the trial state is a product of

* a Jastrow factor ``prod |z_jk|^(-alpha)`` over all pairs (degree ``-alpha N(N-1)/2``),
* intra-group factors ``prod (z_jk)^mu`` weighted over the ``nu`` groups
  (degree ``mu nu K(K-1)/2``),
* for the odd variant, one Slater determinant per group (degree ``nu`` times
  the filled-shell degree of ``K`` oscillator states),
* an optional regularizing factor ``Phi``.

A trap eigenstate of this form has energy ``omega (N + total degree)``.
All arithmetic is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError

VARIANTS = ("even", "odd")
PHI_CHOICES = ("none", "parameter", "neighbor")


class UnphysicalEnergyWarning(UserWarning):
    """Predicted energy below zero: the state needs regularization to be meaningful."""


@dataclass(frozen=True)
class TrialSpec:
    mu: int
    nu: int
    K: int
    variant: str = "even"
    phi_choice: str = "none"

    def __post_init__(self):
        if int(self.mu) != self.mu or self.mu < 0:
            raise DomainError(f"mu must be a nonnegative integer, got {self.mu}")
        if int(self.nu) != self.nu or self.nu < 1:
            raise DomainError(f"nu must be a positive integer, got {self.nu}")
        if math.gcd(self.mu, self.nu) != 1:
            raise DomainError(f"mu/nu = {self.mu}/{self.nu} is not reduced")
        if int(self.K) != self.K or self.K < 1:
            raise DomainError(f"K must be a positive integer, got {self.K}")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.phi_choice not in PHI_CHOICES:
            raise DomainError(f"phi_choice must be one of {PHI_CHOICES}, got {self.phi_choice!r}")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.mu, self.nu)

    @property
    def N(self) -> int:
        return self.nu * self.K

    @property
    def formal(self) -> bool:
        """Even variant with an odd numerator is only a formal construction."""
        return self.variant == "even" and self.mu % 2 == 1


@dataclass(frozen=True)
class DegreeLedger:
    jastrow_degree: Fraction
    edge_degree: Fraction
    slater_degree: int
    phi_degree: Fraction
    total: Fraction
    flags: tuple[str, ...] = field(default=())


def slater_degree(K: int) -> tuple[int, bool]:
    """Lowest total degree of ``K`` distinct 2D oscillator states, and whether ``K`` closes a shell.

    Shell ``n`` holds ``n + 1`` states of degree ``n``.
    """
    if int(K) != K or K < 1:
        raise DomainError(f"K must be a positive integer, got {K}")
    # M = number of complete shells 0..M-1 fitting in K
    M = (math.isqrt(8 * K + 1) - 1) // 2
    full = M * (M + 1) // 2
    deg = (M - 1) * M * (M + 1) // 3 + (K - full) * M
    return deg, K == full


def magic_numbers(kmax: int) -> list[int]:
    out, M = [], 0
    while (k := (M + 1) * (M + 2) // 2) <= kmax:
        out.append(k)
        M += 1
    return out


def degree(spec: TrialSpec, exact_shell: bool = False) -> DegreeLedger:
    """Exact degree ledger of the trial state.

    With ``exact_shell=True`` a non-magic ``K`` in the odd variant is flagged
    ``partial_shell`` (the last shell is then filled by its lowest states).
    """
    a, N, K = spec.alpha, spec.N, spec.K
    flags = []
    jastrow = -a * N * (N - 1) / 2
    edge = Fraction(spec.mu * spec.nu * K * (K - 1), 2)
    if spec.variant == "odd":
        sd, magic = slater_degree(K)
        slater = spec.nu * sd
        if exact_shell and not magic:
            flags.append("partial_shell")
    else:
        slater = 0
    phi = a * (spec.nu - 1) * N if spec.phi_choice == "neighbor" else Fraction(0)
    if spec.formal:
        flags.append("formal")
    total = jastrow + edge + slater + phi
    return DegreeLedger(jastrow, edge, slater, phi, total, tuple(flags))


def angular_momentum(spec: TrialSpec) -> Fraction:
    """``L = -alpha N(N-1)/2 + alpha (nu-1) N/2``; the odd variant needs a magic ``K``."""
    if spec.variant == "odd" and not slater_degree(spec.K)[1]:
        raise DomainError(f"odd variant angular momentum is defined for magic K only, got K={spec.K}")
    a, N = spec.alpha, spec.N
    return -a * N * (N - 1) / 2 + a * (spec.nu - 1) * N / 2


def predicted_energy(spec: TrialSpec, omega=1):
    """``omega (N + total degree)``, exact if ``omega`` is exact; warns if negative."""
    total = degree(spec).total
    base = spec.N + total
    if base < 0:
        warnings.warn(
            f"N + deg = {base} < 0 for {spec}: the state is not physical without regularization",
            UnphysicalEnergyWarning,
            stacklevel=2,
        )
    return omega * base


def slater_exponent_fit(kmin: int = 10, kmax: int = 10**4) -> float:
    """Least-squares slope of ``log slater_degree`` against ``log K`` over magic ``K`` in ``[kmin, kmax]``."""
    ks = [k for k in magic_numbers(kmax) if k >= kmin]
    if len(ks) < 2:
        raise DomainError(f"fewer than two magic numbers in [{kmin}, {kmax}]")
    degs = [slater_degree(k)[0] for k in ks]
    return float(np.polyfit(np.log(ks), np.log(degs), 1)[0])


def slater_local_exponent(M: int) -> float:
    """Slope of ``log degree`` vs ``log K`` between the magic numbers closing shells ``M`` and ``M + 1``."""
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    k0, k1 = (M + 1) * (M + 2) // 2, (M + 2) * (M + 3) // 2
    return math.log(slater_degree(k1)[0] / slater_degree(k0)[0]) / math.log(k1 / k0)
