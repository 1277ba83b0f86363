"""
Density files and atomic output.

A density file is plain text::

    # side=1.0
    # n=16
    # N=28.0
    c00,c01,...
    ...

followed by ``n`` comma-separated rows of cell densities (row ``i`` is the
``i``-th strip in the y direction). Floats are written with ``repr`` so a
write/read round trip is bit-identical.
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .covering import DensityGrid
from .errors import ValidationError

MASS_RTOL = 0.01


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file in the same directory and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def format_density(rho: DensityGrid, N: float | None = None) -> str:
    N = rho.total_mass if N is None else float(N)
    lines = [f"# side={rho.side!r}", f"# n={rho.n}", f"# N={N!r}"]
    lines += [",".join(repr(float(v)) for v in row) for row in rho.cells]
    return "\n".join(lines) + "\n"


def write_density(path, rho: DensityGrid, N: float | None = None) -> Path:
    return atomic_write_text(path, format_density(rho, N))


def _header(line: str, key: str) -> str:
    prefix = f"# {key}="
    if not line.startswith(prefix):
        raise ValidationError(f"expected header line '{prefix}...', got {line!r}")
    return line[len(prefix):].strip()


def parse_density(text: str) -> tuple[DensityGrid, float]:
    """Parse a density file; returns the grid and the header's expected ``N``."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValidationError("density file needs a 3-line header (side, n, N)")
    try:
        side = float(_header(lines[0], "side"))
        n = int(_header(lines[1], "n"))
        N = float(_header(lines[2], "N"))
    except ValueError as exc:
        raise ValidationError(f"malformed density header: {exc}") from exc
    if n < 1 or n & (n - 1):
        raise ValidationError(f"grid size n must be a power of 2, got {n}")
    rows = lines[3:]
    if len(rows) != n:
        raise ValidationError(f"expected {n} payload rows, found {len(rows)}")
    try:
        cells = np.array([[float(v) for v in row.split(",")] for row in rows])
    except ValueError as exc:
        raise ValidationError(f"non-numeric payload entry: {exc}") from exc
    if cells.shape != (n, n):
        raise ValidationError(f"payload must be {n}x{n} values, got rows of unequal or wrong length")
    rho = DensityGrid(cells, side)
    if not math.isclose(rho.total_mass, N, rel_tol=MASS_RTOL, abs_tol=1e-12):
        raise ValidationError(f"payload integrates to {rho.total_mass:.6g}, header says N={N!r}")
    return rho, N


def read_density(path) -> tuple[DensityGrid, float]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read density file {path}: {exc}") from exc
    return parse_density(text)
