"""
Brute-force eigenvalue oracles for the one-dimensional exclusion constants.

Two independent routes check the transcendental equations of
:mod:`exclusionkit.exclusion_constants`:

* :func:`solve_relative_S` / :func:`solve_relative_H` discretize the pairwise
  relative problem on ``(0, l]`` by linear finite elements and return the lowest
  eigenvalue. Richardson extrapolation in the mesh width recovers
  ``xi**2 / l**2``.
* :func:`interval_exclusion_check` discretizes the full ``n``-particle kinetic
  energy on ``[0, l]^n`` with Neumann walls, restricted to the symmetric sector,
  and compares its ground state energy with the local exclusion bound
  ``(n - 1) xi**2 / l**2``.

The delta interaction enters as a Robin condition ``psi'(0+) = eta psi(0)``.
The inverse-square interaction is removed by writing ``psi = r**alpha * u``
(pairwise Jastrow factor for ``n`` particles), which turns the problem into a
weighted Laplacian with weight ``r**(2 alpha)`` and positive wall terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .exclusion_constants import xi_H, xi_S
from .errors import DomainError, RefinementError

Model = Literal["S", "H"]

#: Relative tolerance granted to the discretized n-particle energy.
DISCRETIZATION_ALLOWANCE = 0.05
#: Absolute floor (in units of 1/l^2) so that exact zeros survive roundoff.
ABSOLUTE_FLOOR = 1e-9

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class Grid1D:
    npoints: int
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        a, b = self.interval
        if int(self.npoints) != self.npoints or self.npoints < 16:
            raise DomainError(f"Grid1D needs npoints >= 16, got {self.npoints}")
        if not a < b:
            raise DomainError(f"Grid1D interval must satisfy a < b, got {self.interval}")

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    @property
    def h(self) -> float:
        return self.length / (self.npoints - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.interval[0], self.interval[1], self.npoints)


@dataclass(frozen=True)
class EigResult:
    eigenvalue: float
    eigvec_norm_check: float
    grid: Grid1D


# ---------------------------------------------------------------------------
# relative two-body problems
# ---------------------------------------------------------------------------

def _weighted_p1_matrices(s: np.ndarray, power: float):
    """Stiffness and mass of ``int s^power (u'^2, u^2) ds`` for P1 elements on nodes ``s``."""
    a, b = s[:-1], s[1:]
    h = b - a
    # 8-point Gauss-Legendre per element; exact for integer power <= 13
    xq = 0.5 * (a[:, None] + b[:, None]) + 0.5 * h[:, None] * _GAUSS_X[None, :]
    wq = 0.5 * h[:, None] * _GAUSS_W[None, :] * xq**power
    phi_r = (xq - a[:, None]) / h[:, None]
    phi_l = 1.0 - phi_r
    w0 = wq.sum(axis=1)
    m_ll = (wq * phi_l * phi_l).sum(axis=1)
    m_lr = (wq * phi_l * phi_r).sum(axis=1)
    m_rr = (wq * phi_r * phi_r).sum(axis=1)
    k_el = w0 / h**2
    n = s.size
    kd = np.zeros(n)
    md = np.zeros(n)
    kd[:-1] += k_el
    kd[1:] += k_el
    md[:-1] += m_ll
    md[1:] += m_rr
    K = sp.diags([kd, -k_el, -k_el], [0, -1, 1], format="lil")
    M = sp.diags([md, m_lr, m_lr], [0, -1, 1], format="lil")
    return K, M


def _lowest_generalized(K, M, shift: float = -1.0):
    n = K.shape[0]
    v0 = np.ones(n)
    vals, vecs = eigsh(K.tocsc(), k=1, M=M.tocsc(), sigma=shift, which="LM", v0=v0)
    v = vecs[:, 0]
    norm = float(v @ (M @ v))
    v = v / math.sqrt(norm)
    return float(vals[0]), float(v @ (M @ v))


def _check_grid(grid: Grid1D, l: float) -> None:
    if not l > 0:
        raise DomainError(f"interval length must be positive, got {l}")
    a, b = grid.interval
    if not (math.isclose(a, 0.0, abs_tol=1e-14 * l) and math.isclose(b, l, rel_tol=1e-12)):
        raise DomainError(f"grid must cover [0, {l}], got {grid.interval}")


def solve_relative_S(eta: float, l: float, grid: Grid1D | None = None) -> EigResult:
    """Lowest eigenvalue of ``-d^2/dr^2`` on ``(0, l)`` with ``psi'(0) = eta psi(0)``, ``psi'(l) = 0``.

    ``eta = inf`` gives a Dirichlet condition at the origin.
    """
    eta = float(eta)
    if math.isnan(eta) or eta < 0:
        raise DomainError(f"solve_relative_S requires eta >= 0, got {eta}")
    grid = grid or Grid1D(400, (0.0, l))
    _check_grid(grid, l)
    s = np.linspace(0.0, 1.0, grid.npoints)
    K, M = _weighted_p1_matrices(s, 0.0)
    if math.isinf(eta):
        K, M = K[1:, 1:], M[1:, 1:]
    else:
        K[0, 0] += eta * l
    lam, norm = _lowest_generalized(K, M)
    return EigResult(max(lam, 0.0) / l**2, norm, grid)


def solve_relative_H(alpha: float, l: float, grid: Grid1D | None = None) -> EigResult:
    """Lowest eigenvalue of ``-d^2/dr^2 + alpha(alpha-1)/r^2`` on ``(0, l]``, ``psi ~ r^alpha``, Neumann at ``l``.

    With ``psi = r^alpha u`` the quadratic form becomes
    ``int r^(2 alpha) u'^2 dr + alpha l^(2 alpha - 1) u(l)^2`` against the norm
    ``int r^(2 alpha) u^2 dr``; computed on the unit interval and rescaled.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 1:
        raise DomainError(f"solve_relative_H requires alpha >= 1, got {alpha}")
    grid = grid or Grid1D(400, (0.0, l))
    _check_grid(grid, l)
    s = np.linspace(0.0, 1.0, grid.npoints)
    K, M = _weighted_p1_matrices(s, 2.0 * alpha)
    K[-1, -1] += alpha
    lam, norm = _lowest_generalized(K, M)
    return EigResult(lam / l**2, norm, grid)


def richardson(values: Sequence[float], hs: Sequence[float], order: int = 2) -> float:
    """Extrapolate ``values[i] ~ v + c1 h_i^order + c2 h_i^(2 order) + ...`` to ``h -> 0``."""
    table = [float(v) for v in values]
    hs = [float(h) for h in hs]
    if len(table) != len(hs) or not table:
        raise ValueError("values and hs must be non-empty and of equal length")
    for k in range(1, len(table)):
        table = [
            table[i + 1] + (table[i + 1] - table[i]) / ((hs[i] / hs[i + k]) ** order - 1.0)
            for i in range(len(table) - 1)
        ]
    return table[0]


def extrapolated_eigenvalue(
    model: Model, param: float, l: float, npoints: Sequence[int] = (200, 400, 800)
) -> float:
    """Richardson-extrapolated lowest relative eigenvalue; converges to ``xi^2 / l^2``."""
    solve = {"S": solve_relative_S, "H": solve_relative_H}[model]
    vals, hs = [], []
    for n in npoints:
        g = Grid1D(n, (0.0, l))
        vals.append(solve(param, l, g).eigenvalue)
        hs.append(g.h)
    return richardson(vals, hs)


def analytic_relative_eigenvalue(model: Model, param: float, l: float) -> float:
    """``xi^2 / l^2`` from the root-finding route."""
    if model == "S":
        return xi_S(param * l if not math.isinf(param) else math.inf).value ** 2 / l**2
    return xi_H(param).value ** 2 / l**2


# ---------------------------------------------------------------------------
# n-particle local exclusion check
# ---------------------------------------------------------------------------

@dataclass
class ExclusionCheck:
    model: str
    param: float
    n: int
    l: float
    E0: float
    bound: float
    allowance: float
    passed: bool
    method: str
    npoints: int | None = None
    fermionized: float | None = None
    details: dict = field(default_factory=dict)


def _axis_weights(m: int) -> np.ndarray:
    w = np.ones(m)
    w[0] = w[-1] = 0.5
    return w


def _tensor_problem(model: Model, param: float, n: int, m: int):
    """Assemble the n-particle quadratic form on ``[0, 1]^n`` (scaled units).

    Returns stiffness ``K`` and mass ``M`` (sparse, full tensor grid) and the
    integer node coordinates.
    """
    h = 1.0 / (m - 1)
    x = np.linspace(0.0, 1.0, m)
    w = _axis_weights(m)
    idx = np.indices((m,) * n).reshape(n, -1)
    coords = x[idx]
    nnodes = idx.shape[1]
    cellw = np.prod(w[idx], axis=0) * h**n

    def jastrow_sq(c):
        out = np.ones(c.shape[1])
        for j, k in combinations(range(n), 2):
            out *= np.abs(c[j] - c[k]) ** (2.0 * param)
        return out

    if model == "H":
        W_node = jastrow_sq(coords)
    else:
        W_node = np.ones(nnodes)
    mass = W_node * cellw

    rows, cols, vals = [], [], []
    strides = [m ** (n - 1 - d) for d in range(n)]
    flat = np.arange(nnodes)
    for d in range(n):
        has_next = idx[d] < m - 1
        a = flat[has_next]
        b = a + strides[d]
        mid = coords[:, has_next].copy()
        mid[d] += 0.5 * h
        W_mid = jastrow_sq(mid) if model == "H" else np.ones(a.size)
        # transverse trapezoid weights (exclude axis d)
        tw = np.prod(np.delete(w[idx[:, has_next]], d, axis=0), axis=0) * h ** (n - 1)
        c = 0.5 * W_mid * tw / h
        rows += [a, b, a, b]
        cols += [a, b, b, a]
        vals += [c, c, -c, -c]

    diag = np.zeros(nnodes)
    if model == "S":
        eta = param
        for j, k in combinations(range(n), 2):
            on = idx[j] == idx[k]
            tw = np.prod(np.delete(w[idx[:, on]], k, axis=0), axis=0) * h ** (n - 1)
            diag[on] += 2.0 * eta * tw
    else:
        alpha = param
        for j in range(n):
            wall = (idx[j] == 0) | (idx[j] == m - 1)
            c = coords[:, wall]
            face = np.prod(np.delete(w[idx[:, wall]], j, axis=0), axis=0) * h ** (n - 1)
            # J^2 * sum_k 1/|x_j - x_k| with the vanishing limit at coincidences
            acc = np.zeros(c.shape[1])
            for k in range(n):
                if k == j:
                    continue
                r = np.abs(c[j] - c[k])
                term = r ** (2.0 * alpha - 1.0)
                for a_, b_ in combinations(range(n), 2):
                    if {a_, b_} != {j, k}:
                        term = term * np.abs(c[a_] - c[b_]) ** (2.0 * alpha)
                acc += term
            diag[wall] += 0.5 * alpha * acc * face
    rows.append(flat)
    cols.append(flat)
    vals.append(diag)
    K = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nnodes, nnodes)
    )
    M = sp.diags(mass, format="csr")
    return K, M, idx


def _symmetric_projector(idx: np.ndarray) -> sp.csr_matrix:
    orbit_keys = np.sort(idx, axis=0).T
    _, orbit = np.unique(orbit_keys, axis=0, return_inverse=True)
    orbit = np.asarray(orbit).ravel()
    nnodes = idx.shape[1]
    return sp.csr_matrix((np.ones(nnodes), (np.arange(nnodes), orbit)), shape=(nnodes, orbit.max() + 1))


def lowest_n_particle_energy(model: Model, param: float, n: int, l: float, npoints: int) -> float:
    """Ground state energy of ``T_S`` or ``T_H`` for ``n`` bosons on ``[0, l]`` with Neumann walls.

    Discretized on an ``npoints^n`` tensor grid and restricted to symmetric
    functions. For the H-model the unknown is ``u = psi / prod |x_j - x_k|^alpha``.
    """
    if model == "S":
        if math.isinf(param):
            raise DomainError("eta = inf is the fermion limit; use the fermionized energy")
        scaled = param * l
    else:
        scaled = param
    K, M, idx = _tensor_problem(model, scaled, n, npoints)
    P = _symmetric_projector(idx)
    Ks = (P.T @ K @ P).tocsr()
    Ms = (P.T @ M @ P).tocsr()
    # triple coincidences carry zero weight and no couplings in the H-model
    keep = np.flatnonzero((Ks.diagonal() > 0) | (Ms.diagonal() > 0))
    Ks = Ks[keep][:, keep].tocsc()
    Ms = Ms[keep][:, keep].tocsc()
    v0 = np.ones(Ks.shape[0])
    vals = eigsh(Ks, k=1, M=Ms, sigma=-1.0, which="LM", v0=v0, return_eigenvectors=False)
    return float(vals[0]) / l**2


def fermionized_energy(n: int, l: float) -> float:
    """Sum of the ``n`` lowest Neumann levels ``(k pi / l)^2 / 2`` (free fermions on ``[0, l]``)."""
    return sum(0.5 * (k * math.pi / l) ** 2 for k in range(n))


def _required_points(model: Model, param: float, l: float) -> int:
    if model == "S":
        return max(16, int(math.ceil(4.0 * param * l)) + 1)
    return max(16, int(math.ceil(8.0 * param)) + 1)


def interval_exclusion_check(
    model: Model,
    param: float,
    n: int = 2,
    l: float = 1.0,
    npoints: int | None = None,
    method: Literal["grid", "fermionized"] = "grid",
) -> ExclusionCheck:
    """Compare the n-particle ground state energy on an interval with ``(n-1) xi^2 / l^2``.

    ``method="fermionized"`` is available for the H-model at ``alpha = 1`` (and the
    S-model at ``eta = inf``), where the ground state is the free fermion one.

    Raises
    ------
    RefinementError
        If ``npoints`` cannot resolve the interaction strength.
    """
    if model not in ("S", "H"):
        raise DomainError(f"model must be 'S' or 'H', got {model!r}")
    if n not in (2, 3):
        raise DomainError(f"n must be 2 or 3, got {n}")
    if not l > 0:
        raise DomainError(f"interval length must be positive, got {l}")
    if model == "S" and (math.isnan(param) or param < 0):
        raise DomainError(f"eta must be >= 0, got {param}")
    if model == "H" and not param >= 1:
        raise DomainError(f"alpha must be >= 1, got {param}")

    xi = xi_S(param * l if not math.isinf(param) else math.inf).value if model == "S" else xi_H(param).value
    bound = (n - 1) * xi**2 / l**2
    allowance = DISCRETIZATION_ALLOWANCE * bound + ABSOLUTE_FLOOR / l**2

    fermion_case = (model == "H" and param == 1) or (model == "S" and math.isinf(param))
    ferm = fermionized_energy(n, l) if fermion_case else None
    if method == "grid" and model == "S" and math.isinf(param):
        raise DomainError("eta = inf has no finite grid representation; use method='fermionized'")
    if method == "fermionized":
        if not fermion_case:
            raise DomainError("fermionized method applies only to alpha = 1 or eta = inf")
        E0 = ferm
        npoints = None
    else:
        if npoints is None:
            npoints = 128 if n == 2 else 40
        need = _required_points(model, param, l)
        if npoints < need:
            raise RefinementError(
                f"npoints={npoints} cannot resolve {model}-model parameter {param} on length {l}; "
                f"use npoints >= {need}"
            )
        E0 = lowest_n_particle_energy(model, param, n, l, npoints)
    return ExclusionCheck(
        model=model,
        param=float(param),
        n=n,
        l=float(l),
        E0=E0,
        bound=bound,
        allowance=allowance,
        passed=E0 >= bound - allowance,
        method=method,
        npoints=npoints,
        fermionized=ferm,
    )
