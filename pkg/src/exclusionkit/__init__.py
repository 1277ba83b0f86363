"""Exclusion constants, Lieb-Thirring-type bounds and covering algorithms for intermediate statistics."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateCover,
    DomainError,
    ExclusionKitError,
    PreconditionError,
    RangeError,
    RefinementError,
    RootSearchError,
    ValidationError,
)
from .exclusion_constants import RootResult, bessel_j, dyson_lenard_ball_root, xi_F, xi_H, xi_S, xi_S_approx  # noqa: E402
from .fractionality import XiAResult, xi_A, xi_A_limit, xi_A_rational  # noqa: E402
from .covering import CoverTree, DensityGrid, UncertaintyConstants, build_tree, classify_A  # noqa: E402
from .bounds import BoundConstants, GasSpec  # noqa: E402

__all__ = [
    "__version__",
    "BoundConstants",
    "ConfigError",
    "CoverTree",
    "DegenerateCover",
    "DensityGrid",
    "DomainError",
    "ExclusionKitError",
    "GasSpec",
    "PreconditionError",
    "RangeError",
    "RefinementError",
    "RootResult",
    "RootSearchError",
    "UncertaintyConstants",
    "ValidationError",
    "XiAResult",
    "bessel_j",
    "build_tree",
    "classify_A",
    "dyson_lenard_ball_root",
    "xi_A",
    "xi_A_limit",
    "xi_A_rational",
    "xi_F",
    "xi_H",
    "xi_S",
    "xi_S_approx",
]
