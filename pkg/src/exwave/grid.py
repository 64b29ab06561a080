"""Radial grids and field storage on the exterior of the unit ball.

The domain is the radial slice r in [1, 1+L] of the exterior of the unit
ball, with homogeneous Dirichlet conditions at both ends: r = 1 is the
obstacle boundary, r = 1+L an artificial outer truncation that is exact for
compactly supported data over horizons shorter than the light travel time
to the wall.

Fields are stored through the substitution g(r) = r * u(r) sampled at the
N interior nodes r_j = 1 + j*h, h = L/(N+1); the implicit zero samples
g_0 = g_{N+1} = 0 carry both boundary conditions.  All spatial norms use
the 3D radial measure r^2 dr with the solid-angle factor dropped, which is
what makes the discrete Plancherel identity of :mod:`exwave.transform`
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConfigurationError, InputError


@lru_cache(maxsize=128)
def _grid_arrays(L: float, N: int):
    """Node and frequency arrays for a grid, cached per (L, N)."""
    h = L / (N + 1)
    j = np.arange(1, N + 1, dtype=float)
    t = j * h
    r = 1.0 + t
    lam = j * (math.pi / L)
    for a in (t, r, lam):
        a.flags.writeable = False
    return t, r, lam


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid with its sine spectrum.

    Attributes
    ----------
    L : float
        Extent of the domain beyond the obstacle; r runs over [1, 1+L].
    N : int
        Number of interior nodes.
    """

    L: float
    N: int

    @property
    def h(self) -> float:
        return self.L / (self.N + 1)

    @property
    def dlam(self) -> float:
        """Spectral spacing pi/L."""
        return math.pi / self.L

    @property
    def t(self) -> np.ndarray:
        """Shifted nodes t_j = r_j - 1."""
        return _grid_arrays(self.L, self.N)[0]

    @property
    def r(self) -> np.ndarray:
        return _grid_arrays(self.L, self.N)[1]

    @property
    def lam(self) -> np.ndarray:
        """Resolvable frequencies lam_k = k*pi/L, k = 1..N."""
        return _grid_arrays(self.L, self.N)[2]

    @property
    def lam_max(self) -> float:
        return self.N * math.pi / self.L


def make_grid(L: float, N: int) -> RadialGrid:
    """Build a radial grid on [1, 1+L] with N interior nodes."""
    if not (isinstance(N, (int, np.integer)) and not isinstance(N, bool)):
        raise ConfigurationError(f"grid size N must be an integer, got {N!r}")
    if not (math.isfinite(L) and L > 0):
        raise ConfigurationError(f"grid extent L must be positive and finite, got {L!r}")
    if N < 1:
        raise ConfigurationError(f"grid size N must be >= 1, got {N}")
    return RadialGrid(float(L), int(N))


@dataclass
class RadialField:
    """Radial function stored as g_j = r_j * u(r_j) at the interior nodes."""

    grid: RadialGrid
    g: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if g.shape != (self.grid.N,):
            raise InputError(f"field has {g.shape} samples, grid expects ({self.grid.N},)")
        self.g = g

    @property
    def values(self) -> np.ndarray:
        """Point values u(r_j) = g_j / r_j."""
        return self.g / self.grid.r

    def __add__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.g + other.g)

    def __sub__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.g - other.g)

    def __mul__(self, c: float) -> "RadialField":
        return RadialField(self.grid, c * self.g)

    __rmul__ = __mul__

    def __neg__(self) -> "RadialField":
        return RadialField(self.grid, -self.g)


def _check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise ConfigurationError(
            f"fields live on different grids: {a.grid} vs {b.grid}"
        )


def zero_field(grid: RadialGrid) -> RadialField:
    return RadialField(grid, np.zeros(grid.N))


@dataclass
class WaveState:
    """Displacement/velocity pair (u, u_t) with its time stamp."""

    u: RadialField
    ut: RadialField
    t: float = 0.0

    def __post_init__(self):
        _check_same_grid(self.u, self.ut)

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid


def sample(profile: Callable[[np.ndarray], np.ndarray], grid: RadialGrid) -> RadialField:
    """Sample u(r) = profile(r) onto the grid, storing g = r*u.

    The profile must accept a numpy array of radii and evaluate pointwise.
    """
    vals = np.broadcast_to(np.asarray(profile(grid.r), dtype=float), (grid.N,))
    if not np.all(np.isfinite(vals)):
        raise InputError("profile produced non-finite samples")
    return RadialField(grid, grid.r * vals)


def lp_norm(f: RadialField, p: float) -> float:
    """L^p norm with measure r^2 dr over [1, 1+L].

    Quadrature is the interior rectangle rule h * sum_j; p = inf returns
    the grid sup norm max_j |u(r_j)|.
    """
    if p != math.inf and not (math.isfinite(p) and p >= 1):
        raise ConfigurationError(f"norm exponent must satisfy p >= 1, got {p!r}")
    absu = np.abs(f.g) / f.grid.r
    if p == math.inf:
        return float(absu.max()) if f.grid.N else 0.0
    # |u|^p r^2 = |g|^p r^{2-p}
    integrand = absu**p * f.grid.r**2
    return float((f.grid.h * integrand.sum()) ** (1.0 / p))


def weighted_sup(f: RadialField, alpha: float) -> float:
    """max_j r_j^alpha * |u(r_j)|, the weighted sup used by the pointwise bound."""
    return float((f.grid.r ** (alpha - 1.0) * np.abs(f.g)).max())


def support_radius(f: RadialField, rel_threshold: float = 1e-9) -> float:
    """Outermost radius where |g| exceeds rel_threshold * max|g|.

    Returns 1.0 for the zero field (empty support).
    """
    peak = np.abs(f.g).max()
    if peak == 0.0:
        return 1.0
    idx = np.nonzero(np.abs(f.g) > rel_threshold * peak)[0]
    if idx.size == 0:
        return 1.0
    return float(f.grid.r[idx[-1]])
