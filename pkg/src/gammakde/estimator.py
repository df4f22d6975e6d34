"""Sample container and the kernel estimates of a density and its slope.

Estimates are plain averages of (derivatives of) gamma kernels over the
sample. The kernel shape varies with the evaluation point, so there is no
translation-invariant convolution structure to exploit: no binning or FFT
acceleration applies, and grid evaluation is a dense sample-by-gridpoint
computation, vectorized over the sample in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kernels import Branch, shape_params
from .specfun import digamma, log_gamma

__all__ = [
    "SampleMeta",
    "Sample",
    "GridEvaluation",
    "density_at",
    "derivative_at",
    "evaluate_on_grid",
    "save_grid_csv",
    "load_grid_csv",
]

_FLOAT_FMT = ".12g"


@dataclass(frozen=True)
class SampleMeta:
    """Provenance of a sample: the seed it was drawn with and a source label."""

    seed: int
    source: str


@dataclass(frozen=True)
class Sample:
    """An observed sample of nonnegative reals.

    Order is irrelevant to every estimate; it is kept only because it makes
    runs reproducible and files diffable.
    """

    values: np.ndarray
    meta: SampleMeta | None = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("sample must be a non-empty 1-D collection")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample values must be finite")
        if np.any(values < 0.0):
            raise ValueError("sample values must be >= 0")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GridEvaluation:
    """Density and derivative estimates tabulated on a grid."""

    grid: np.ndarray
    density: np.ndarray
    derivative: np.ndarray
    bandwidth: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        density = np.asarray(self.density, dtype=float)
        derivative = np.asarray(self.derivative, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("grid must be a non-empty 1-D array")
        if density.shape != grid.shape or derivative.shape != grid.shape:
            raise ValueError("density/derivative must match the grid length")
        if not np.all(np.isfinite(grid)) or np.any(grid < 0.0):
            raise ValueError("grid points must be finite and >= 0")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(density)) or np.any(density < 0.0):
            raise ValueError("density values must be finite and >= 0")
        if not np.all(np.isfinite(derivative)):
            raise ValueError("derivative values must be finite")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0.0):
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "derivative", derivative)


def _core(sample: Sample, xs: np.ndarray, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Density and derivative estimates at points xs, vectorized in both axes."""
    values = sample.values
    n = values.size
    pos = values > 0.0
    vp = values[pos]
    n_zero = n - vp.size
    log_t = np.log(vp)
    t_over_b = vp / b
    log_b = math.log(b)

    density = np.empty_like(xs)
    derivative = np.empty_like(xs)
    # Per-point constants are scalars; block over the grid to bound memory.
    block = max(1, int(2_000_000 // max(vp.size, 1)))
    for start in range(0, xs.size, block):
        stop = min(start + block, xs.size)
        m = stop - start
        rho = np.empty(m)
        pref = np.empty(m)
        norm = np.empty(m)
        psi = np.empty(m)
        for j in range(m):
            shape = shape_params(xs[start + j], b)
            rho[j] = shape.rho
            norm[j] = shape.rho * log_b + log_gamma(shape.rho)
            psi[j] = digamma(shape.rho)
            if shape.branch is Branch.INTERIOR:
                pref[j] = 1.0 / b
            else:
                pref[j] = shape.x / (2.0 * b * b)
        if vp.size:
            log_k = (rho[:, None] - 1.0) * log_t[None, :] - t_over_b[None, :]
            log_k -= norm[:, None]
            kern = np.exp(log_k)
            log_fac = log_t[None, :] - (log_b + psi[:, None])
            dens_sum = kern.sum(axis=1)
            deriv_sum = (kern * log_fac).sum(axis=1)
        else:
            dens_sum = np.zeros(m)
            deriv_sum = np.zeros(m)
        if n_zero:
            # t = 0 contributes to the density only through the rho = 1
            # kernel (the x = 0 exponential); its derivative limit is 0.
            dens_sum = dens_sum + np.where(rho == 1.0, n_zero / b, 0.0)
        density[start:stop] = dens_sum / n
        derivative[start:stop] = pref * deriv_sum / n
    return density, derivative


def density_at(sample: Sample, b: float, x: float) -> float:
    """Kernel density estimate at a single point x >= 0."""
    shape = shape_params(x, b)  # validates x and b
    dens, _ = _core(sample, np.array([shape.x]), shape.b)
    return float(dens[0])


def derivative_at(sample: Sample, b: float, x: float) -> float:
    """Kernel estimate of the density derivative at a single point x >= 0."""
    shape = shape_params(x, b)
    _, deriv = _core(sample, np.array([shape.x]), shape.b)
    return float(deriv[0])


def evaluate_on_grid(sample: Sample, b: float, grid) -> GridEvaluation:
    """Evaluate both estimates on a strictly increasing grid of points."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0.0):
        raise ValueError("grid points must be finite and >= 0")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    shape_params(grid[0], b)  # validates b once
    density, derivative = _core(sample, grid, float(b))
    return GridEvaluation(
        grid=grid, density=density, derivative=derivative, bandwidth=float(b)
    )


def save_grid_csv(evaluation: GridEvaluation, path: str | Path) -> None:
    """Write a grid evaluation as CSV with columns x,density,derivative."""
    lines = ["x,density,derivative"]
    for x, f, d in zip(evaluation.grid, evaluation.density, evaluation.derivative):
        lines.append(
            f"{x:{_FLOAT_FMT}},{f:{_FLOAT_FMT}},{d:{_FLOAT_FMT}}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_grid_csv(path: str | Path, bandwidth: float) -> GridEvaluation:
    """Read a grid evaluation written by save_grid_csv.

    The bandwidth is not part of the CSV contract and must be supplied.
    """
    text = Path(path).read_text(encoding="ascii").strip().splitlines()
    if not text or text[0].strip() != "x,density,derivative":
        raise ValueError(f"{path}: expected header 'x,density,derivative'")
    rows = [line.split(",") for line in text[1:]]
    if any(len(row) != 3 for row in rows):
        raise ValueError(f"{path}: malformed row")
    data = np.array([[float(c) for c in row] for row in rows])
    return GridEvaluation(
        grid=data[:, 0],
        density=data[:, 1],
        derivative=data[:, 2],
        bandwidth=bandwidth,
    )
