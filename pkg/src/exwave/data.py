"""Initial-data families: smooth compact bumps, single modes, rough spectra.

Bump superpositions probe inequality sharpness; the rough spectral family
realizes data that lies in H^s "but barely" (spectral density
lam^{-s-1/2} (1+lam)^{-delta} with seeded random signs).  All generators
are deterministic given (seed, grid, parameters).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .grid import RadialField, RadialGrid, sample, zero_field
from .transform import SpectralField, inverse


def bump_profile(center: float, width: float, amplitude: float = 1.0) -> Callable:
    """Smooth compactly supported bump u(r) = a*exp(1 - 1/(1 - y^2)), y = (r-center)/width.

    Peak value is `amplitude` at r = center; support is [center-width, center+width].
    """

    def profile(r: np.ndarray) -> np.ndarray:
        y = (np.asarray(r, dtype=float) - center) / width
        out = np.zeros_like(y)
        inside = np.abs(y) < 1.0
        out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
        return out

    return profile


def bump_field(grid: RadialGrid, center: float, width: float, amplitude: float = 1.0) -> RadialField:
    return sample(bump_profile(center, width, amplitude), grid)


def random_bumps(
    grid: RadialGrid,
    rng: np.random.Generator,
    n_bumps: tuple[int, int] = (1, 5),
    centers: tuple[float, float] = (1.5, 6.0),
    widths: tuple[float, float] | float = (0.2, 1.5),
    amplitudes: tuple[float, float] = (0.2, 2.0),
) -> RadialField:
    """Superposition of randomly placed smooth bumps with random signs.

    `widths` may be a (lo, hi) range or a single fixed width.  Centers are
    shifted so every bump's support stays strictly inside (1, 1+L); a bump
    touching either wall would break the Dirichlet class.
    """
    count = int(rng.integers(n_bumps[0], n_bumps[1] + 1))
    f = zero_field(grid)
    for _ in range(count):
        w = float(widths) if np.isscalar(widths) else float(rng.uniform(*widths))
        lo = max(centers[0], 1.0 + w + 0.05)
        hi = min(centers[1], 1.0 + grid.L - w - 0.05)
        if hi <= lo:
            raise ValueError(f"bump of width {w:g} does not fit between the walls")
        c = float(rng.uniform(lo, hi))
        a = float(rng.uniform(*amplitudes)) * (1.0 if rng.random() < 0.5 else -1.0)
        f = f + bump_field(grid, c, w, a)
    return f


def mode_field(grid: RadialGrid, k: int, amplitude: float = 1.0) -> RadialField:
    """The k-th grid eigenmode sampled physically: g_j = a*sin(lam_k t_j)."""
    if not 1 <= k <= grid.N:
        raise ValueError(f"mode index k must lie in [1, {grid.N}], got {k}")
    return RadialField(grid, amplitude * np.sin(grid.lam[k - 1] * grid.t))


def spectral_mode(grid: RadialGrid, k: int, amplitude: float = 1.0) -> RadialField:
    """Field whose transform is a*delta_k (single coefficient)."""
    if not 1 <= k <= grid.N:
        raise ValueError(f"mode index k must lie in [1, {grid.N}], got {k}")
    c = np.zeros(grid.N)
    c[k - 1] = amplitude
    return inverse(SpectralField(grid, c))


def power_density_field(
    grid: RadialGrid,
    exponent: float,
    rng: np.random.Generator,
    amplitude: float = 1.0,
) -> RadialField:
    """Random-sign field with spectral density c_k = a * lam_k^exponent * xi_k."""
    signs = rng.choice([-1.0, 1.0], size=grid.N)
    c = amplitude * grid.lam**exponent * signs
    return inverse(SpectralField(grid, c))


def rough_field(
    grid: RadialGrid,
    s: float,
    rng: np.random.Generator,
    amplitude: float = 1.0,
    delta: float = 0.01,
) -> RadialField:
    """Field at critical density for H^s: c_k = a * lam_k^{-s-1/2} (1+lam_k)^{-delta} xi_k."""
    signs = rng.choice([-1.0, 1.0], size=grid.N)
    c = amplitude * grid.lam ** (-s - 0.5) * (1.0 + grid.lam) ** (-delta) * signs
    return inverse(SpectralField(grid, c))


def rough_pair(
    grid: RadialGrid,
    s: float,
    seed: int,
    amplitude: float = 1.0,
    delta: float = 0.01,
) -> tuple[RadialField, RadialField]:
    """Rough (u0, u1) with u0 barely in H^s and u1 barely in H^{s-1}."""
    rng = np.random.default_rng(seed)
    u0 = rough_field(grid, s, rng, amplitude=amplitude, delta=delta)
    u1 = rough_field(grid, s - 1.0, rng, amplitude=amplitude, delta=delta)
    return u0, u1


def build_pair(grid: RadialGrid, params: dict) -> tuple[RadialField, RadialField]:
    """Build (u0, u1) from a data-kind mapping: kind bump | mode | rough.

    bump:  amplitude, center, width (u1 = 0)
    mode:  k, amplitude (u1 = 0)
    rough: s, seed, amplitude, delta
    """
    kind = params["kind"]
    if kind == "bump":
        u0 = bump_field(
            grid,
            float(params.get("center", 3.0)),
            float(params.get("width", 1.0)),
            float(params.get("amplitude", 1.0)),
        )
        return u0, zero_field(grid)
    if kind == "mode":
        u0 = mode_field(grid, int(params.get("k", 1)), float(params.get("amplitude", 1.0)))
        return u0, zero_field(grid)
    if kind == "rough":
        return rough_pair(
            grid,
            float(params["s"]),
            int(params.get("seed", 0)),
            amplitude=float(params.get("amplitude", 1.0)),
            delta=float(params.get("delta", 0.01)),
        )
    raise ValueError(f"unknown data kind {kind!r}")
