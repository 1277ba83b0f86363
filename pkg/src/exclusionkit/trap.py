"""
Harmonic and power-law trap bounds.

The lower bound comes from minimizing the Thomas-Fermi-like functional

    E[rho] = C_A xi^2 int rho^2 + int (omega^2/2) |x|^2 rho,   int rho = N,

whose minimizer is the truncated parabola ``(mu - omega^2 |x|^2/2)_+ / (2 C_A xi^2)``.
The upper bound places ``N`` disjoint copies of a compactly supported bump
on a lattice and optimizes the lattice spacing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

from .bounds import BoundConstants
from .exclusion_constants import xi_H
from .errors import ConfigError, DomainError, ValidationError
from .fractionality import xi_A

# Unit-radius bump phi(x) = sqrt(5/pi) (1 - |x|^2)^2 on the plane, normalized in L^2.
BUMP_NORM2 = 5.0 / math.pi
BUMP_E1 = 20.0 / 3.0  # int |grad phi|^2
BUMP_M2 = 1.0 / 6.0  # int |x|^2 phi^2

SELF_CHECK_RTOL = 1e-6
GOLDEN_XTOL = 1e-6


def bump_constants_quadrature() -> tuple[float, float, float]:
    """Recompute ``(||phi||^2, e1, m2)`` by radial quadrature; oracle for the stored constants."""
    c = BUMP_NORM2
    opts = dict(epsabs=0.0, epsrel=1e-13)
    norm = integrate.quad(lambda r: 2 * math.pi * r * c * (1 - r * r) ** 4, 0, 1, **opts)[0]
    e1 = integrate.quad(lambda r: 2 * math.pi * r * c * (4 * r * (1 - r * r)) ** 2, 0, 1, **opts)[0]
    m2 = integrate.quad(lambda r: 2 * math.pi * r**3 * c * (1 - r * r) ** 4, 0, 1, **opts)[0]
    return norm, e1, m2


@dataclass(frozen=True)
class TrapSpec:
    omega: float
    N: int
    alpha: object = 1
    L_total: object = 0
    mu_exponent: float = 2.0
    a: float | None = None

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not self.mu_exponent > 0:
            raise DomainError(f"mu_exponent must be positive, got {self.mu_exponent}")
        if self.a is not None and not self.a > 0:
            raise DomainError(f"a must be positive, got {self.a}")


@dataclass(frozen=True)
class MinimizerProfile:
    """Truncated parabola ``(a_level - omega^2 r^2/2)_+ / (2 C_A xi^2)``."""

    a_level: float
    support_radius: float
    normalization_check: float
    omega: float
    C_A: float
    xi: float

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return np.maximum(self.a_level - 0.5 * self.omega**2 * r * r, 0.0) / (2 * self.C_A * self.xi**2)


@dataclass
class HarmonicLowerBound:
    profile: MinimizerProfile | None
    E_lower: float
    functional_value: float
    xi: float
    degenerate: bool = False
    flags: list[str] = field(default_factory=list)


def harmonic_lower_bound_value(xi: float, omega: float, N: float, C_A: float) -> float:
    return math.sqrt(8.0 * C_A / math.pi) * xi * omega * N**1.5 / 3.0


def minimize_harmonic_functional(
    spec: TrapSpec, consts: BoundConstants = BoundConstants(), xi: float | None = None
) -> HarmonicLowerBound:
    """Closed-form minimizer and lower bound ``(1/3) sqrt(8 C_A/pi) xi omega N^(3/2)``.

    ``xi`` defaults to ``xi_A(alpha, N)``, which needs ``N >= 2``; pass it
    explicitly for ``N = 1``. The profile is integrated numerically and the
    functional is evaluated on it; both must match the closed forms to
    ``1e-6`` relative, else :class:`ValidationError`.
    """
    if xi is None:
        if spec.N < 2:
            raise DomainError("xi_A(alpha, N) needs N >= 2; pass xi explicitly for N = 1")
        xi = float(xi_A(float(spec.alpha), spec.N).value)
    if xi < 0:
        raise DomainError(f"xi must be >= 0, got {xi}")
    if xi == 0:
        return HarmonicLowerBound(None, 0.0, 0.0, 0.0, True, ["xi_zero"])

    C, w, N = consts.C_A, spec.omega, spec.N
    level = w * xi * math.sqrt(2 * C * N / math.pi)
    R = math.sqrt(2 * level) / w
    prof_tmp = MinimizerProfile(level, R, math.nan, w, C, xi)

    def rho(r):
        return float(prof_tmp.density(r))

    opts = dict(epsabs=0.0, epsrel=1e-12, limit=200)
    mass = integrate.quad(lambda r: 2 * math.pi * r * rho(r), 0, R, **opts)[0]
    energy = integrate.quad(
        lambda r: 2 * math.pi * r * (C * xi * xi * rho(r) ** 2 + 0.5 * w * w * r * r * rho(r)), 0, R, **opts
    )[0]
    E = harmonic_lower_bound_value(xi, w, N, C)
    if abs(mass - N) > 1e-8 * N or abs(energy - E) > SELF_CHECK_RTOL * E:
        raise ValidationError(f"minimizer self-check failed: mass {mass} vs {N}, functional {energy} vs {E}")
    profile = MinimizerProfile(level, R, mass / N, w, C, xi)
    return HarmonicLowerBound(profile, E, energy, xi)


def chitra_sen_bound(spec: TrapSpec):
    """``omega (N + |L + alpha N (N-1)/2|)``; exact when the inputs are exact rationals."""
    alpha, L, N = spec.alpha, spec.L_total, spec.N
    if isinstance(alpha, str):
        alpha = Fraction(alpha)
    return spec.omega * (N + abs(L + alpha * N * (N - 1) / 2))


C2_PINNED = math.sqrt(6.0) / (8.0 * math.pi)


def powerlaw_trap_bound(spec: TrapSpec, C_mu: float | None = None) -> float:
    """``C(mu) (xi_H(alpha) a)^(2mu/(mu+2)) N^((3mu+2)/(mu+2))`` for ``V = a^mu |x|^mu``.

    For ``mu = 2`` the constant defaults to ``sqrt(6)/(8 pi)`` and ``a`` to
    ``omega/sqrt(2)``, reproducing ``(sqrt(3)/(8 pi)) xi_H omega N^2``.
    """
    mu = spec.mu_exponent
    if C_mu is None:
        if mu != 2:
            raise ConfigError(f"no constant C(mu) is pinned for mu={mu}; supply C_mu")
        C_mu = C2_PINNED
    a = spec.a
    if a is None:
        if mu != 2:
            raise ConfigError("the trap strength a must be given for mu != 2")
        a = spec.omega / math.sqrt(2.0)
    xi = xi_H(float(spec.alpha)).value
    return C_mu * (xi * a) ** (2 * mu / (mu + 2)) * spec.N ** ((3 * mu + 2) / (mu + 2))


# --- upper bound by lattice trial states ---------------------------------------------------------

_LATTICES = {
    "square": np.array([[1.0, 0.0], [0.0, 1.0]]),
    "hex": np.array([[1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]),
}


def lattice_points(N: int, packing: str = "square") -> np.ndarray:
    """The ``N`` points of a unit-spacing lattice closest to the origin (ties broken by angle)."""
    if packing not in _LATTICES:
        raise DomainError(f"packing must be one of {sorted(_LATTICES)}, got {packing!r}")
    basis = _LATTICES[packing]
    k = int(math.ceil(math.sqrt(N))) + 2
    ij = np.array(list(itertools.product(range(-k, k + 1), repeat=2)), dtype=float)
    pts = ij @ basis
    r2 = np.round(np.einsum("ij,ij->i", pts, pts), 12)
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    order = np.lexsort((ang, r2))
    return pts[order[:N]]


def trial_energy(r: float, N: int, sum_sq: float, omega: float, e1: float = BUMP_E1, m2: float = BUMP_M2) -> float:
    """Energy of ``N`` bumps of radius ``r/2`` at lattice sites of spacing ``r``.

    Kinetic ``N (1/2) e1 (2/r)^2`` plus potential ``(omega^2/2) sum_j (|y_j|^2 + m2 (r/2)^2)``,
    where ``sum_j |y_j|^2 = r^2 sum_sq``.
    """
    return 2.0 * N * e1 / r**2 + 0.5 * omega**2 * r**2 * (sum_sq + N * m2 / 4.0)


@dataclass(frozen=True)
class TrialRow:
    N: int
    r_opt: float
    E_upper: float
    E_closed: float
    R: float


@dataclass
class TrialTable:
    rows: list[TrialRow]
    slope: float
    intercept: float
    packing: str


def _golden_minimize(f, lo: float, hi: float, xtol: float = GOLDEN_XTOL) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol * 0.5 * (abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def upper_bound_trial(
    N_list, omega: float = 1.0, e1: float = BUMP_E1, packing: str = "square", m2: float = BUMP_M2
) -> TrialTable:
    """Minimize the lattice trial energy over the spacing for each ``N`` and fit ``log E`` vs ``log N``."""
    N_list = [int(n) for n in N_list]
    if len(N_list) < 4:
        raise ValidationError(f"need at least 4 values of N for a scaling fit, got {len(N_list)}")
    if not e1 > 0:
        raise DomainError(f"bump energy e1 must be positive, got {e1}")
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    rows = []
    for N in sorted(set(N_list)):
        if N < 1:
            raise DomainError(f"N must be positive, got {N}")
        pts = lattice_points(N, packing)
        sq = np.einsum("ij,ij->i", pts, pts)
        S = math.fsum(sq)
        B = S + N * m2 / 4.0
        r_star = (4.0 * N * e1 / (omega**2 * B)) ** 0.25
        r = _golden_minimize(lambda x: trial_energy(x, N, S, omega, e1, m2), r_star / 10, r_star * 10)
        E = trial_energy(r, N, S, omega, e1, m2)
        closed = 2.0 * omega * math.sqrt(N * e1 * B)
        R = r * (math.sqrt(float(sq.max())) + 0.5)
        rows.append(TrialRow(N, r, E, closed, R))
    logN = np.log([row.N for row in rows])
    logE = np.log([row.E_upper for row in rows])
    slope, intercept = np.polyfit(logN, logE, 1)
    return TrialTable(rows, float(slope), float(intercept), packing)


# --- symmetrization identity ---------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetrizationReport:
    n: int
    norm_ratio: float
    kinetic_ratio: float
    npoints: int
    passed: bool


def _bump_1d(x, center, width):
    u = (x - center) / width
    inside = np.abs(u) < 1
    val = np.where(inside, (1 - u * u) ** 2, 0.0)
    der = np.where(inside, -4 * u * (1 - u * u) / width, 0.0)
    return val, der


def symmetrization_energy_identity_check(n: int, disjoint: bool = True, npoints: int = 4001) -> SymmetrizationReport:
    """Compare norm and kinetic energy of a product of disjoint bumps with its symmetrization.

    The symmetrized state ``(n!)^(-1/2) sum_sigma prod_j phi_sigma(j)(x_j)`` is
    evaluated through one-particle overlap matrices on a common grid, which is
    exact tensor-grid quadrature of the n-particle integrals.
    """
    if n not in (2, 3):
        raise DomainError(f"n must be 2 or 3, got {n}")
    if not disjoint:
        raise ValidationError("the symmetrization identity only holds for disjoint supports")
    width = 0.4
    centers = [j * 1.0 for j in range(n)]  # spacing 1 > 2 * width
    x = np.linspace(-1.0, n * 1.0, npoints)
    w = np.full(npoints, x[1] - x[0])
    w[[0, -1]] *= 0.5
    vals, ders = zip(*(_bump_1d(x, c, width) for c in centers))
    V, D = np.array(vals), np.array(ders)
    G = (V * w) @ V.T
    K = (D * w) @ D.T

    norm_phi = float(np.prod(np.diag(G)))
    kin_phi = sum(K[k, k] * np.prod([G[j, j] for j in range(n) if j != k]) for k in range(n))

    perms = list(itertools.permutations(range(n)))
    norm_psi = 0.0
    kin_psi = 0.0
    for s in perms:
        for t in perms:
            norm_psi += np.prod([G[s[j], t[j]] for j in range(n)])
            for k in range(n):
                kin_psi += K[s[k], t[k]] * np.prod([G[s[j], t[j]] for j in range(n) if j != k])
    norm_psi /= math.factorial(n)
    kin_psi /= math.factorial(n)
    nr, kr = norm_psi / norm_phi, kin_psi / kin_phi
    nr, kr = float(nr), float(kr)
    return SymmetrizationReport(n, nr, kr, npoints, abs(nr - 1) <= 1e-10 and abs(kr - 1) <= 1e-10)
