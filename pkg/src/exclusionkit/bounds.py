"""
Closed-form Lieb-Thirring-type lower bounds and exact-model comparators.

Every evaluator is a direct formula; the exclusion constants come from
:mod:`exclusionkit.exclusion_constants` and :mod:`exclusionkit.fractionality`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .exclusion_constants import xi_H, xi_S, xi_S_array
from .covering import DensityGrid
from .errors import DomainError, PreconditionError, ValidationError
from .fractionality import as_fraction, xi_A

MODELS = ("A", "S", "H", "F")


@dataclass(frozen=True)
class BoundConstants:
    """Lieb-Thirring constants. Defaults sit at the rigorous ends of the admissible ranges."""

    C_A: float = 0.021
    C_S: float = 1e-5
    C_H: float = 1.0 / 32.0
    c_anyon: float = 0.056

    def __post_init__(self):
        checks = (
            ("C_A", self.C_A, 1e-4, math.pi),
            ("C_S", self.C_S, 1e-5, 2.0 / 3.0),
            ("C_H", self.C_H, 1.0 / 32.0, 2.0 / 3.0),
        )
        for name, val, lo, hi in checks:
            if not (lo * (1 - 1e-12) <= val <= hi * (1 + 1e-12)):
                raise DomainError(f"{name}={val} outside admissible range [{lo}, {hi}]")
        if not self.c_anyon > 0:
            raise DomainError(f"c_anyon must be positive, got {self.c_anyon}")


@dataclass(frozen=True)
class GasSpec:
    """Homogeneous gas: ``N`` particles on extent ``L`` (1D) or area ``L^2`` (2D).

    ``extent`` is the side length ``L`` in both cases.
    """

    model: str
    param: object
    N: float
    extent: float
    gamma: float = 1.0
    q: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}, got {self.model!r}")
        if not self.N > 0:
            raise DomainError(f"N must be positive, got {self.N}")
        if not self.extent > 0:
            raise DomainError(f"extent must be positive, got {self.extent}")
        if not self.gamma >= 1:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if int(self.q) != self.q or self.q < 1:
            raise DomainError(f"q must be a positive integer, got {self.q}")

    @property
    def dim(self) -> int:
        return 2 if self.model == "A" else 1

    @property
    def rhobar(self) -> float:
        return self.N / self.extent**self.dim


@dataclass
class BoundReport:
    kind: str
    value: float
    inputs: dict
    constants: dict
    flags: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def lt_anyon_kinetic(rho: DensityGrid, alpha, N: int, consts: BoundConstants = BoundConstants()) -> float:
    """``C_A xi_A(alpha, N)^2 int rho^2``; the density must carry mass ``N`` to within 1%."""
    mass = rho.total_mass
    if abs(mass - N) > 0.01 * N:
        raise ValidationError(f"density integrates to {mass:.6g}, expected N={N} (1% tolerance)")
    xi = float(xi_A(float(alpha), int(N)).value)
    return consts.C_A * xi * xi * rho.integral_rho2


def gas_anyon(spec: GasSpec, consts: BoundConstants = BoundConstants()) -> BoundReport:
    """Per-unit-area bound ``C_A rhobar^2 / nu^2`` for odd-numerator ``alpha = mu/nu``."""
    frac = as_fraction(spec.param) % 2
    inputs = {"alpha": str(frac), "N": spec.N, "L": spec.extent, "rhobar": spec.rhobar}
    if frac.numerator % 2 == 0:
        return BoundReport("gas_anyon", 0.0, inputs, asdict(consts), ["even_numerator"])
    value = consts.C_A * spec.rhobar**2 / frac.denominator**2
    return BoundReport("gas_anyon", value, inputs, asdict(consts))


def lt_lieb_liniger(x: np.ndarray, rho: np.ndarray, eta: float, consts: BoundConstants = BoundConstants()) -> float:
    """``C_S int xi_S(2 eta / rho)^2 rho^3 dx`` by trapezoid quadrature on samples ``(x, rho)``.

    Where ``rho = 0`` the integrand vanishes.
    """
    if eta < 0:
        raise DomainError(f"eta must be >= 0, got {eta}")
    x = np.asarray(x, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if x.shape != rho.shape or x.ndim != 1:
        raise ValidationError("x and rho must be 1D arrays of equal length")
    if np.any(rho < 0):
        raise ValidationError("density must be nonnegative")
    integrand = np.zeros_like(rho)
    pos = rho > 0
    if eta > 0:
        with np.errstate(divide="ignore", over="ignore"):
            t = np.where(pos, 2.0 * eta / np.where(pos, rho, 1.0), 0.0)
        xi = xi_S_array(t)
        integrand[pos] = xi[pos] ** 2 * rho[pos] ** 3
    return consts.C_S * float(np.trapezoid(integrand, x))


def lt_lieb_liniger_homogeneous(spec: GasSpec, consts: BoundConstants = BoundConstants()) -> float:
    """Total bound ``C_S xi_S(2 eta/(gamma rhobar))^2 rhobar^3 L`` for ``rho <= gamma rhobar``."""
    return lt_lieb_liniger_gas(spec, consts) * spec.extent


def lt_lieb_liniger_gas(spec: GasSpec, consts: BoundConstants = BoundConstants()) -> float:
    """Energy per length ``C_S xi_S(2 eta/(gamma rhobar))^2 rhobar^3``."""
    eta = float(spec.param)
    if eta < 0:
        raise DomainError(f"eta must be >= 0, got {eta}")
    rb = spec.rhobar
    t = math.inf if math.isinf(eta) else 2.0 * eta / (spec.gamma * rb)
    xi = xi_S(t).value
    return consts.C_S * xi * xi * rb**3


def lt_cs_local(m: float, lenQ: float, alpha: float, consts: BoundConstants = BoundConstants()) -> float:
    """``C_H xi_H(alpha)^2 m^3 / |Q|^2``, valid when the interval carries mass ``m >= 2``."""
    if m < 2:
        raise PreconditionError(f"local CS bound requires mass >= 2 on the interval, got {m}")
    if not lenQ > 0:
        raise DomainError(f"interval length must be positive, got {lenQ}")
    xi = xi_H(alpha).value
    return consts.C_H * xi * xi * m**3 / lenQ**2


def lt_cs_gas(spec: GasSpec, consts: BoundConstants = BoundConstants()) -> float:
    """Energy per length ``C_H xi_H(alpha)^2 rhobar^3``."""
    xi = xi_H(float(spec.param)).value
    return consts.C_H * xi * xi * spec.rhobar**3


def lt_fermion(rho_moment: float, d: int, C_d: float, q: int = 1) -> float:
    """Kinetic Lieb-Thirring bound for ``q``-state fermions.

    ``q^(-2/d) d (2/C_d)^(2/d) / (d+2)^(1+2/d) * int rho^(1+2/d)``.
    """
    if d not in (1, 2, 3):
        raise DomainError(f"d must be 1, 2 or 3, got {d}")
    if int(q) != q or q < 1:
        raise DomainError(f"q must be a positive integer, got {q}")
    if not C_d > 0:
        raise DomainError(f"C_d must be positive, got {C_d}")
    p = 2.0 / d
    coeff = d * (2.0 / C_d) ** p / (d + 2.0) ** (1.0 + p)
    return q ** (-p) * coeff * rho_moment


def cs_exact_thermo(alpha: float, rhobar: float) -> float:
    """Calogero-Sutherland ground-state energy per length, ``(pi^2/6) alpha^2 rhobar^3``."""
    if alpha < 1:
        raise DomainError(f"CS comparator requires alpha >= 1, got {alpha}")
    return math.pi**2 / 6.0 * alpha**2 * rhobar**3


def cs_exact_trap(alpha: float, N: int, omega: float) -> float:
    """Harmonically trapped CS ground state ``omega N (1 + alpha (N - 1)) / 2``."""
    if alpha < 1:
        raise DomainError(f"CS comparator requires alpha >= 1, got {alpha}")
    return 0.5 * omega * N * (1.0 + alpha * (N - 1))


LL_SMALL_T = 0.1
LL_LARGE_T = 100.0


def ll_e_asymptote(t: float) -> tuple[float, str]:
    """Lieb-Liniger ``e(t)`` from its asymptotes only.

    Returns ``(t, "weak")`` for ``t <= 0.1``, ``(pi^2/3, "strong")`` for
    ``t >= 100`` and ``(nan, "uncertified")`` in between.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t <= LL_SMALL_T:
        return float(t), "weak"
    if t >= LL_LARGE_T:
        return math.pi**2 / 3.0, "strong"
    return math.nan, "uncertified"

