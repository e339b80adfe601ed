"""Deterministic quadrature and distribution-tabulation utilities.

All distance laws in the engine travel as tabulated CDFs/PDFs on a fixed
grid; this module owns those containers and the adaptive quadrature that
produces them. Everything here is a pure function of its inputs (identical
inputs give bit-identical outputs), which the reproducibility contract of
the command-line tools relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, IntegrationDomainError, ModelInconsistencyError

DEFAULT_REL_TOL = 1e-6
DEFAULT_GRID_POINTS = 512

# monotonicity slack for noisy CDF-like inputs
_CDF_NOISE_TOL = 1e-6


@dataclass(frozen=True)
class CdfTable:
    """A non-decreasing distribution function tabulated on a distance grid."""

    grid: np.ndarray      # strictly increasing abscissae [m]
    values: np.ndarray    # probabilities in [0, 1]

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.ndim != 1 or grid.size == 0:
            raise DomainError("CDF grid must be a non-empty 1-D array")
        if not np.all(np.isfinite(grid)):
            raise DomainError("CDF grid must be finite")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise DomainError("CDF grid must be strictly increasing")
        if values.shape != grid.shape:
            raise DomainError("CDF values must match grid length")
        if np.any(np.diff(values) < -1e-12):
            raise ModelInconsistencyError("CDF values must be non-decreasing")
        if values[0] < -1e-12 or values[-1] > 1.0 + 1e-12:
            raise DomainError("CDF values must lie in [0, 1]")

    @property
    def total_mass(self) -> float:
        return float(self.values[-1] - self.values[0])

    def at(self, x) -> np.ndarray:
        """Linear interpolation, clamped to the boundary values outside the grid."""
        return np.interp(x, self.grid, self.values)


@dataclass(frozen=True)
class PdfTable:
    """A non-negative density tabulated on a distance grid."""

    grid: np.ndarray       # strictly increasing abscissae [m]
    densities: np.ndarray  # values >= 0, trapezoid-normalized to the CDF mass

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        densities = np.asarray(self.densities, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "densities", densities)
        if grid.ndim != 1 or grid.size < 2:
            raise DomainError("PDF grid must hold at least two points")
        if not np.all(np.diff(grid) > 0):
            raise DomainError("PDF grid must be strictly increasing")
        if densities.shape != grid.shape:
            raise DomainError("PDF densities must match grid length")
        if np.any(densities < -1e-12):
            raise DomainError("PDF densities must be non-negative")

    @property
    def mass(self) -> float:
        return float(np.trapezoid(self.densities, self.grid))


def _eval_vectorized(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, falling back to a scalar loop for plain functions."""
    try:
        out = np.asarray(f(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(xi))) for xi in x])


def _check_finite(fx: np.ndarray, x: np.ndarray) -> None:
    bad = ~np.isfinite(fx)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise IntegrationDomainError(float(x[i]), float(fx[i]))


def integrate_1d(f: Callable, lo: float, hi: float,
                 rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Adaptive composite Simpson integral of ``f`` over [lo, hi].

    The integrand may be vectorized (ndarray -> ndarray) or scalar.  Intervals
    are refined until the Richardson error estimate of every panel is below
    its share of ``rel_tol`` times the running integral magnitude.  The
    refinement path depends only on (f, lo, hi, rel_tol), so results are
    bit-reproducible.
    """
    if not np.isfinite(lo) or not np.isfinite(hi):
        raise DomainError("integration bounds must be finite")
    if hi < lo:
        raise DomainError("integration bounds must satisfy lo <= hi")
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    if hi == lo:
        return 0.0

    width = hi - lo
    # initial panels: capture moderate structure before adapting
    n0 = 8
    a = lo + width * np.arange(n0) / n0
    b = lo + width * np.arange(1, n0 + 1) / n0
    m = 0.5 * (a + b)
    xs = np.concatenate([a, m, [hi]])
    fs = _eval_vectorized(f, xs)
    _check_finite(fs, xs)
    fa = fs[:n0]
    fm = fs[n0:2 * n0]
    fb = np.concatenate([fs[1:n0], [fs[-1]]])
    simpson = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    total = float(np.sum(simpson))
    accepted = 0.0
    max_rounds = 48
    for _ in range(max_rounds):
        if a.size == 0:
            break
        # split each pending panel in half and compare Simpson estimates
        ml = 0.5 * (a + m)
        mr = 0.5 * (m + b)
        xs = np.concatenate([ml, mr])
        fs = _eval_vectorized(f, xs)
        _check_finite(fs, xs)
        fml, fmr = fs[:a.size], fs[a.size:]
        s_left = (m - a) / 6.0 * (fa + 4.0 * fml + fm)
        s_right = (b - m) / 6.0 * (fm + 4.0 * fmr + fb)
        s2 = s_left + s_right
        err = np.abs(s2 - simpson) / 15.0
        scale = max(abs(accepted + float(np.sum(s2))), 1e-300)
        tol = rel_tol * scale * (b - a) / width
        done = err <= tol
        # Richardson-extrapolated contribution for converged panels
        accepted += float(np.sum(s2[done] + (s2[done] - simpson[done]) / 15.0))
        keep = ~done
        if not np.any(keep):
            a = np.empty(0)
            break
        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        m = 0.5 * (a + b)
        fm_new = _eval_vectorized(f, m)
        _check_finite(fm_new, m)
        fm = fm_new
        simpson = np.concatenate([s_left[keep], s_right[keep]])
        total = accepted + float(np.sum(simpson))
    else:
        # panels below resolvable width: accept current estimates
        accepted += float(np.sum(simpson))
        return accepted
    if a.size:
        accepted += float(np.sum(simpson))
    return accepted


def tabulate_cdf(f: Callable, lo: float, hi: float,
                 points: int = DEFAULT_GRID_POINTS) -> CdfTable:
    """Sample a CDF-like function on a uniform grid and repair numeric noise.

    Values are clamped to [0, 1] and monotonized by running maximum.  A drop
    larger than the noise tolerance between adjacent grid points is treated
    as a modelling bug, not noise.
    """
    if points < 16:
        raise DomainError("tabulate_cdf needs at least 16 grid points")
    if hi <= lo:
        raise DomainError("tabulate_cdf needs hi > lo")
    grid = np.linspace(lo, hi, points)
    vals = _eval_vectorized(f, grid)
    _check_finite(vals, grid)
    drops = np.diff(vals)
    if np.any(drops < -_CDF_NOISE_TOL):
        i = int(np.argmin(drops))
        raise ModelInconsistencyError(
            f"function decreases by {-drops[i]:.3e} between x={grid[i]:.6g} "
            f"and x={grid[i + 1]:.6g}; not CDF-like"
        )
    vals = np.clip(vals, 0.0, 1.0)
    vals = np.maximum.accumulate(vals)
    return CdfTable(grid=grid, values=vals)


def pdf_from_cdf(c: CdfTable) -> PdfTable:
    """Differentiate a tabulated CDF: central differences inside, one-sided at
    the ends, clamped at zero, then rescaled so the trapezoid integral equals
    the CDF's total mass."""
    g, v = c.grid, c.values
    if g.size < 2:
        raise DomainError("cannot differentiate a single-point table")
    dens = np.gradient(v, g)
    dens = np.maximum(dens, 0.0)
    raw_mass = float(np.trapezoid(dens, g))
    target = c.total_mass
    if raw_mass > 0.0:
        dens = dens * (target / raw_mass)
    return PdfTable(grid=g, densities=dens)
