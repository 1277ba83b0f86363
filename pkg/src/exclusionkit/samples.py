"""Reference densities: the splitting-figure layout and seeded random densities for stress tests."""

from __future__ import annotations

import numpy as np

from .covering import B_THRESHOLD, DensityGrid


def _fill(cells: np.ndarray, row: int, col: int, k: int, mass: float) -> None:
    n = cells.shape[0]
    cells[row:row + k, col:col + k] = mass / (k / n) ** 2


def figure_density() -> DensityGrid:
    """16 x 16 unit-square density reproducing the splitting figure.

    Root quadrants: X1 (mass 16), X2 (mass 10) and two A-squares of mass 1.
    X1 splits into Y (11.5) and three A-squares of mass 1.5; Y splits into a
    level-3 B-square of mass 7 and three A-squares of mass 1.5; X2 splits into
    two level-2 B-squares of mass 4 and two A-squares of mass 1.
    """
    c = np.zeros((16, 16))
    _fill(c, 8, 0, 8, 1.0)
    _fill(c, 8, 8, 8, 1.0)
    for r, q in ((0, 4), (4, 0), (4, 4)):
        _fill(c, r, q, 4, 1.5)
    _fill(c, 0, 0, 2, 7.0)
    for r, q in ((0, 2), (2, 0), (2, 2)):
        _fill(c, r, q, 2, 1.5)
    _fill(c, 0, 8, 4, 4.0)
    _fill(c, 0, 12, 4, 4.0)
    _fill(c, 4, 8, 4, 1.0)
    _fill(c, 4, 12, 4, 1.0)
    return DensityGrid(c)


def random_density(rng: np.random.Generator, N: float, n: int = 128, side: float = 1.0) -> DensityGrid:
    """Gaussian blobs, a multi-scale corner spike and a background, normalized to mass ``N``.

    The result is blended with the uniform density until no single cell
    carries mass ``>= 8``, so the quadtree always terminates on the grid.
    """
    h = side / n
    x = (np.arange(n) + 0.5) * h
    X, Y = np.meshgrid(x, x)
    dens = np.full((n, n), rng.uniform(0.0, 0.2))
    for _ in range(rng.integers(1, 6)):
        cx, cy = rng.uniform(0, side, 2)
        s = rng.uniform(0.04, 0.3) * side
        dens += rng.uniform(0.2, 1.0) * np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / (2 * s * s)) / s**2
    if rng.random() < 0.5:
        # equal mass at dyadic scales toward a corner
        corner_r, corner_c = rng.integers(0, 2, 2) * (n - 1)
        k = n
        while k >= 1:
            rs = slice(0, k) if corner_r == 0 else slice(n - k, n)
            cs = slice(0, k) if corner_c == 0 else slice(n - k, n)
            dens[rs, cs] += 0.1 / (k * h) ** 2
            k //= 2
    dens *= N / (dens.sum() * h * h)
    uniform = np.full_like(dens, N / side**2)
    t = 0.0
    while (dens * h * h).max() >= B_THRESHOLD:
        t = 0.5 if t == 0 else (1 + t) / 2
        dens = (1 - t) * dens + t * uniform
    return DensityGrid(dens, side)
