"""
Dyadic covering of a planar density by A- and B-squares.

Starting from the root square, every square carrying mass ``>= 8`` is split
into four. Leaves with mass in ``[2, 8)`` are B-squares (local exclusion is
effective there); leaves with mass ``< 2`` are A-squares, further divided into
A2 (density far from constant, local uncertainty wins) and A1 (nearly constant,
dominated by the nearby B-squares).

Densities are piecewise constant on an ``n x n`` cell grid with ``n`` a power of
two, so the mass ``int_Q rho`` and second moment ``int_Q rho^2`` of every dyadic
square are exact cell sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import DegenerateCover, DomainError, RefinementError, ValidationError

A_THRESHOLD = 2.0
B_THRESHOLD = 8.0


@dataclass(frozen=True)
class DensityGrid:
    """Cell-averaged density on the square ``origin + [0, side]^2``.

    ``cells[i, j]`` is the density on the cell in row ``i`` (y direction) and
    column ``j`` (x direction).
    """

    cells: np.ndarray
    side: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=float)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValidationError(f"density cells must be a square array, got shape {cells.shape}")
        n = cells.shape[0]
        if n < 1 or n & (n - 1):
            raise ValidationError(f"grid size must be a power of 2, got {n}")
        if not np.all(np.isfinite(cells)) or np.any(cells < 0):
            raise ValidationError("density cells must be finite and nonnegative")
        if not self.side > 0:
            raise ValidationError(f"side must be positive, got {self.side}")
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def cell_area(self) -> float:
        return (self.side / self.n) ** 2

    @property
    def area(self) -> float:
        return self.side**2

    @property
    def total_mass(self) -> float:
        return float(self.cells.sum() * self.cell_area)

    @property
    def integral_rho2(self) -> float:
        return float((self.cells**2).sum() * self.cell_area)

    @classmethod
    def uniform(cls, N: float, n: int = 16, side: float = 1.0) -> "DensityGrid":
        return cls(np.full((n, n), N / side**2), side)

    def scaled(self, factor: float) -> "DensityGrid":
        return DensityGrid(self.cells * factor, self.side, self.origin)


@dataclass(frozen=True)
class UncertaintyConstants:
    """Constants of the local uncertainty principle; ``c2 > c1 > 0``.

    The defaults are illustrative and not certified values.
    """

    c1: float = 0.5
    c2: float = 4.0

    def __post_init__(self):
        if not (0 < self.c1 < self.c2):
            raise DomainError(f"need c2 > c1 > 0, got c1={self.c1}, c2={self.c2}")

    @property
    def a2_ratio(self) -> float:
        return 2.0 * self.c2 / self.c1


@dataclass(frozen=True)
class PrimedConstants:
    c1p: float
    c2p: float
    c3p: float

    def __post_init__(self):
        if min(self.c1p, self.c2p, self.c3p) <= 0:
            raise DomainError(f"primed constants must be positive, got {self}")


def derive_primed(consts: UncertaintyConstants, c_exclusion: float = 0.056) -> PrimedConstants:
    """Primed constants obtained by interpolating local uncertainty and local exclusion.

    On a B-square (``2 <= m < 8``) exclusion gives ``T >= c xi^2 m / (2|Q|)`` and
    uncertainty gives ``T >= c1 s/m - c2 m/|Q|``. With weight ``t`` on the latter and
    ``xi <= 1``, ``T >= xi^2 (c1' s + c2'/|Q|)`` where ``c1' = t c1 / 8`` and
    ``c2' = (1 - t) c - 2 t c2``; ``t = c / (2 (c + 2 c2))`` keeps ``c2' > 0``.
    ``c3' = c2' c1 / (32 c2)`` converts the A1 sum bound into a density integral.
    """
    c1, c2, c = consts.c1, consts.c2, c_exclusion
    t = c / (2.0 * (c + 2.0 * c2))
    c1p = t * c1 / B_THRESHOLD
    c2p = (1.0 - t) * c - 2.0 * t * c2
    c3p = c2p * c1 / (32.0 * c2)
    return PrimedConstants(c1p, c2p, c3p)


@dataclass(eq=False)
class CoverNode:
    level: int
    row: int
    col: int
    ncells: int
    origin: tuple[float, float]
    side: float
    mass: float
    second_moment: float
    label: str = "internal"
    children: list["CoverNode"] = field(default_factory=list)
    parent: "CoverNode | None" = field(default=None, repr=False)

    @property
    def area(self) -> float:
        return self.side**2

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def ancestors(self) -> Iterator["CoverNode"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "origin": list(self.origin),
            "side": self.side,
            "mass": self.mass,
            "second_moment": self.second_moment,
            "label": self.label,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass(eq=False)
class CoverTree:
    root: CoverNode
    density: DensityGrid

    def nodes(self) -> Iterator[CoverNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self, *labels: str) -> list[CoverNode]:
        return [nd for nd in self.nodes() if nd.is_leaf and (not labels or nd.label in labels)]

    def to_dict(self) -> dict:
        return {
            "side": self.density.side,
            "n": self.density.n,
            "total_mass": self.density.total_mass,
            "root": self.root.to_dict(),
        }


def _moments(rho: DensityGrid, row: int, col: int, k: int) -> tuple[float, float]:
    block = rho.cells[row:row + k, col:col + k]
    return float(block.sum() * rho.cell_area), float((block * block).sum() * rho.cell_area)


def build_tree(
    rho: DensityGrid, a_threshold: float = A_THRESHOLD, b_threshold: float = B_THRESHOLD
) -> CoverTree:
    """Split squares of mass ``>= b_threshold`` into four until every leaf is A or B.

    Raises
    ------
    DegenerateCover
        If the total mass is below ``a_threshold`` (no B-square can exist).
    RefinementError
        If a single grid cell still carries mass ``>= b_threshold``.
    """
    h = rho.side / rho.n

    def make(level, row, col, k, parent):
        m, s = _moments(rho, row, col, k)
        origin = (rho.origin[0] + col * h, rho.origin[1] + row * h)
        node = CoverNode(level, row, col, k, origin, k * h, m, s, parent=parent)
        if m >= b_threshold:
            if k == 1:
                raise RefinementError(
                    f"cell at row {row}, col {col} holds mass {m:.4g} >= {b_threshold}; "
                    "refine the density grid"
                )
            half = k // 2
            node.children = [
                make(level + 1, row + dr, col + dc, half, node)
                for dr in (0, half)
                for dc in (0, half)
            ]
        elif m >= a_threshold:
            node.label = "B"
        else:
            node.label = "A"
        return node

    total = rho.total_mass
    if total < a_threshold:
        raise DegenerateCover(f"total mass {total:.4g} < {a_threshold}: no B-square exists")
    return CoverTree(make(0, 0, 0, rho.n, None), rho)


def classify_A(tree: CoverTree, consts: UncertaintyConstants) -> CoverTree:
    """Relabel A-leaves as A2 if ``s > (2 c2/c1) m^2 / |Q|`` and A1 otherwise (in place)."""
    ratio = consts.a2_ratio
    for leaf in tree.leaves("A", "A1", "A2"):
        leaf.label = "A2" if leaf.second_moment > ratio * leaf.mass**2 / leaf.area else "A1"
    return tree


def association(tree: CoverTree, qb: CoverNode, labels=("A1",)) -> list[CoverNode]:
    """Leaves with a label in ``labels`` that are direct children of a strict ancestor of ``qb``."""
    if qb.label != "B" or not qb.is_leaf:
        raise DomainError("association sets are defined for B-leaves only")
    out = []
    for anc in qb.ancestors():
        out.extend(c for c in anc.children if c.is_leaf and c.label in labels)
    return out


def a1_association(tree: CoverTree, qb: CoverNode) -> list[CoverNode]:
    return association(tree, qb, ("A1",))


@dataclass(frozen=True)
class A1SumCheck:
    level: int
    origin: tuple[float, float]
    side: float
    count: int
    total: float
    bound: float
    margin: float
    passed: bool


def verify_a1_sum(tree: CoverTree, consts: UncertaintyConstants) -> list[A1SumCheck]:
    """Check ``sum_{Q in A1(Q_B)} int_Q rho^2 <= (32 c2/c1) / |Q_B|`` for every B-leaf."""
    out = []
    for qb in tree.leaves("B"):
        assoc = a1_association(tree, qb)
        total = math.fsum(q.second_moment for q in assoc)
        bound = 32.0 * consts.c2 / consts.c1 / qb.area
        out.append(A1SumCheck(qb.level, qb.origin, qb.side, len(assoc), total, bound, bound - total, total <= bound))
    return out


def local_uncertainty_rhs(m: float, moment: float, area: float, consts: UncertaintyConstants, d: int = 2) -> float:
    """``c1 int rho^(1+2/d) / m^(2/d) - c2 m / |Q|^(2/d)``.

    ``moment`` is ``int rho^2`` for ``d = 2`` and ``int rho^3`` for ``d = 1``;
    ``area`` is the volume ``|Q|`` of the cube.
    """
    if d not in (1, 2):
        raise DomainError(f"d must be 1 or 2, got {d}")
    if m <= 0:
        return 0.0
    p = 2.0 / d
    return consts.c1 * moment / m**p - consts.c2 * m / area**p


@dataclass
class AnyonBoundReport:
    """Local pieces of the covering lower bound for the anyon kinetic energy.

    ``bound`` is ``b_part + xi^2 a2_part``; ``a2_part`` alone is an
    xi-independent uncertainty contribution reported separately.
    ``global_form`` is ``C_A xi^2 int rho^2`` with ``C_A`` derived from the
    constants in use, and never exceeds ``bound``.
    """

    bound: float
    b_part: float
    a2_part: float
    global_form: float
    C_A_config: float
    xi: float
    integral_rho2: float
    n_B: int
    n_A1: int
    n_A2: int
    constants: dict
    degenerate: bool = False


def config_C_A(consts: UncertaintyConstants, primed: PrimedConstants) -> float:
    return min(primed.c1p, primed.c3p, consts.c1 / 4.0)


def assemble_anyon_bound(
    tree: CoverTree | None,
    xi: float,
    consts: UncertaintyConstants,
    primed: PrimedConstants | None = None,
    density: DensityGrid | None = None,
) -> AnyonBoundReport:
    """Sum the B-square and A2-square lower bounds over a classified tree.

    ``tree=None`` stands for a degenerate cover and yields a zero bound.
    """
    if xi < 0:
        raise DomainError(f"xi must be >= 0, got {xi}")
    primed = primed or derive_primed(consts)
    C_A = config_C_A(consts, primed)
    const_dict = {"c1": consts.c1, "c2": consts.c2, "c1p": primed.c1p, "c2p": primed.c2p, "c3p": primed.c3p}
    if tree is None:
        rho2 = density.integral_rho2 if density is not None else 0.0
        return AnyonBoundReport(0.0, 0.0, 0.0, 0.0, C_A, xi, rho2, 0, 0, 0, const_dict, degenerate=True)
    if any(leaf.label == "A" for leaf in tree.leaves()):
        classify_A(tree, consts)
    xi2 = xi * xi
    bs = tree.leaves("B")
    a2 = tree.leaves("A2")
    b_part = xi2 * math.fsum(primed.c1p * q.second_moment + primed.c2p / q.area for q in bs)
    a2_part = math.fsum(consts.c1 / 4.0 * q.second_moment for q in a2)
    rho2 = tree.density.integral_rho2
    return AnyonBoundReport(
        bound=b_part + xi2 * a2_part,
        b_part=b_part,
        a2_part=a2_part,
        global_form=C_A * xi2 * rho2,
        C_A_config=C_A,
        xi=xi,
        integral_rho2=rho2,
        n_B=len(bs),
        n_A1=len(tree.leaves("A1")),
        n_A2=len(a2),
        constants=const_dict,
    )


def cover_and_bound(
    rho: DensityGrid,
    xi: float,
    consts: UncertaintyConstants,
    primed: PrimedConstants | None = None,
    a_threshold: float = A_THRESHOLD,
    b_threshold: float = B_THRESHOLD,
) -> tuple[CoverTree | None, AnyonBoundReport]:
    """Build, classify and assemble in one step; degenerate covers give a zero bound."""
    try:
        tree = classify_A(build_tree(rho, a_threshold, b_threshold), consts)
    except DegenerateCover:
        return None, assemble_anyon_bound(None, xi, consts, primed, density=rho)
    return tree, assemble_anyon_bound(tree, xi, consts, primed)
