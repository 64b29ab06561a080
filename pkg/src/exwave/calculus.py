r"""Functional calculus, Littlewood-Paley projections, norms, and exponents.

A multiplier m acts by m(sqrt(-Delta)) f = inverse(m(lam) * forward(f)).
Littlewood-Paley projections use the fixed smooth cutoff

    phi(lam) = 1                     for lam <= 1,
    phi(lam) = B(2-lam)/(B(2-lam)+B(lam-1))   on (1, 2),  B(x) = exp(-1/x),
    phi(lam) = 0                     for lam >= 2,

with phi_N(lam) = phi(lam/N), psi_N = phi_N - phi_{N/2}; psi_N is supported
in [N/2, 2N] and the psi_N telescope exactly.  Projections are defined for
dyadic N between the smallest power of two >= 2*dlam and the largest power
of two <= lam_max; querying outside that band is an error rather than a
silent truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import AdmissibilityError, BandError, ConfigurationError
from .grid import RadialField, RadialGrid, WaveState, lp_norm
from .transform import _forward_g, _inverse_c

# A multiplier symbol: any callable evaluating m(lam) on an array of frequencies.
Multiplier = Callable[[np.ndarray], np.ndarray]


def apply_multiplier(m: Multiplier, f: RadialField) -> RadialField:
    """Apply the operator with symbol m in spectral coordinates."""
    sym = np.broadcast_to(np.asarray(m(f.grid.lam), dtype=float), (f.grid.N,))
    if not np.all(np.isfinite(sym)):
        raise ConfigurationError("multiplier symbol is non-finite on the grid spectrum")
    c = _forward_g(f.g, f.grid.h)
    return RadialField(f.grid, _inverse_c(sym * c, f.grid.dlam))


# ---------------------------------------------------------------------------
# dyadic cutoffs
# ---------------------------------------------------------------------------

def _bump(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def cutoff(lam) -> np.ndarray:
    """The base smooth cutoff phi: 1 on [0,1], 0 on [2,inf)."""
    lam = np.asarray(lam, dtype=float)
    a = _bump(2.0 - lam)
    b = _bump(lam - 1.0)
    return a / (a + b)


def low_symbol(lam, N: float) -> np.ndarray:
    """phi_N(lam) = phi(lam/N)."""
    return cutoff(np.asarray(lam, dtype=float) / N)


def band_symbol(lam, N: float) -> np.ndarray:
    """psi_N(lam) = phi_N(lam) - phi_{N/2}(lam), supported in [N/2, 2N]."""
    lam = np.asarray(lam, dtype=float)
    return cutoff(lam / N) - cutoff(lam / (N / 2.0))


def dyadic_band(grid: RadialGrid) -> np.ndarray:
    """Resolvable dyadic frequencies: powers of two in [2*dlam, lam_max]."""
    lo = math.ceil(math.log2(2.0 * grid.dlam))
    hi = math.floor(math.log2(grid.lam_max))
    if hi < lo:
        raise BandError(f"grid (L={grid.L}, N={grid.N}) resolves no dyadic band")
    return 2.0 ** np.arange(lo, hi + 1)


def _is_power_of_two(N: float) -> bool:
    if not (N > 0 and math.isfinite(N)):
        return False
    m, e = math.frexp(N)
    return m == 0.5


def _require_in_band(N: float, grid: RadialGrid) -> float:
    if not _is_power_of_two(N):
        raise BandError(f"projection frequency must be a power of two, got {N!r}")
    if not (2.0 * grid.dlam <= N <= grid.lam_max):
        raise BandError(
            f"dyadic frequency {N:g} outside resolvable band "
            f"[{2.0 * grid.dlam:g}, {grid.lam_max:g}]"
        )
    return float(N)


@lru_cache(maxsize=512)
def _band_table(L: float, Ngrid: int, N: float) -> np.ndarray:
    lam = RadialGrid(L, Ngrid).lam
    tab = band_symbol(lam, N)
    tab.flags.writeable = False
    return tab


@lru_cache(maxsize=512)
def _low_table(L: float, Ngrid: int, N: float) -> np.ndarray:
    lam = RadialGrid(L, Ngrid).lam
    tab = low_symbol(lam, N)
    tab.flags.writeable = False
    return tab


def lp_project(f: RadialField, N: float) -> RadialField:
    """Littlewood-Paley block P_N f, spectrum in [N/2, 2N]."""
    N = _require_in_band(N, f.grid)
    sym = _band_table(f.grid.L, f.grid.N, N)
    c = _forward_g(f.g, f.grid.h)
    return RadialField(f.grid, _inverse_c(sym * c, f.grid.dlam))


def lp_low(f: RadialField, N: float) -> RadialField:
    """Low-frequency part P_{<=N} f, spectrum in [0, 2N]."""
    N = _require_in_band(N, f.grid)
    sym = _low_table(f.grid.L, f.grid.N, N)
    c = _forward_g(f.g, f.grid.h)
    return RadialField(f.grid, _inverse_c(sym * c, f.grid.dlam))


def lp_high(f: RadialField, N: float) -> RadialField:
    """High-frequency part P_{>N} f = f - P_{<=N} f, spectrum in [N, inf)."""
    N = _require_in_band(N, f.grid)
    sym = 1.0 - _low_table(f.grid.L, f.grid.N, N)
    c = _forward_g(f.g, f.grid.h)
    return RadialField(f.grid, _inverse_c(sym * c, f.grid.dlam))


# ---------------------------------------------------------------------------
# norms and energy
# ---------------------------------------------------------------------------

def sobolev_norm(f: RadialField, sigma: float) -> float:
    """Homogeneous Sobolev norm of order sigma, (sum_k lam_k^{2 sigma} c_k^2 dlam)^{1/2}.

    sigma = 0 reproduces the L^2 norm (Plancherel); negative sigma is safe
    because every grid frequency is positive.
    """
    c = _forward_g(f.g, f.grid.h)
    w = f.grid.lam ** (2.0 * sigma) * c**2
    return math.sqrt(f.grid.dlam * float(w.sum()))


def besov_norm(f: RadialField, sigma: float, q: float, rho: float) -> float:
    """Besov norm (sum_N N^{sigma rho} ||P_N f||_{L^q}^rho)^{1/rho} over the band.

    q = inf uses the grid sup norm as an L^inf proxy.
    """
    if q != math.inf and not (math.isfinite(q) and q >= 1):
        raise ConfigurationError(f"besov spatial exponent must be >= 1, got {q!r}")
    if not (math.isfinite(rho) and rho >= 1):
        raise ConfigurationError(f"besov summation exponent must be finite >= 1, got {rho!r}")
    total = 0.0
    for N in dyadic_band(f.grid):
        block = lp_norm(lp_project(f, N), q)
        total += N ** (sigma * rho) * block**rho
    return total ** (1.0 / rho)


def energy(st: WaveState, p: float) -> float:
    """Wave energy 0.5||u_t||_2^2 + 0.5||u||_{H^1}^2 + ||u||_{p+1}^{p+1}/(p+1).

    The gradient term is computed spectrally, which is exact for the
    Dirichlet quadratic form in the g = r*u representation.
    """
    if p < 1:
        raise ConfigurationError(f"nonlinearity power must satisfy p >= 1, got {p!r}")
    kinetic = 0.5 * lp_norm(st.ut, 2) ** 2
    gradient = 0.5 * sobolev_norm(st.u, 1.0) ** 2
    potential = lp_norm(st.u, p + 1) ** (p + 1) / (p + 1)
    return kinetic + gradient + potential


# ---------------------------------------------------------------------------
# parameters and growth exponents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParameterSet:
    """Nonlinearity power p, regularity s, and truncation level J.

    p is restricted to [3, 5]; the endpoints are accepted for formula
    evaluation but sit outside the open range of the growth statements.
    """

    p: float
    s: float
    J: int

    def __post_init__(self):
        if not (3.0 <= self.p <= 5.0):
            raise ConfigurationError(f"power p must lie in [3, 5], got {self.p!r}")
        if not (0.0 < self.s <= 1.0):
            raise ConfigurationError(f"regularity s must lie in (0, 1], got {self.s!r}")
        if not (isinstance(self.J, (int, np.integer)) and not isinstance(self.J, bool)):
            raise ConfigurationError(f"truncation level J must be an integer, got {self.J!r}")

    @property
    def s_c(self) -> float:
        """Scaling-critical regularity 3/2 - 2/(p-1)."""
        return 1.5 - 2.0 / (self.p - 1.0)

    @property
    def s_min(self) -> float:
        """Admissibility threshold 1 - (p+3)(1-s_c)/(4(2p-3))."""
        return 1.0 - (self.p + 3.0) * (1.0 - self.s_c) / (4.0 * (2.0 * self.p - 3.0))

    @property
    def in_open_range(self) -> bool:
        return 3.0 < self.p < 5.0

    def require_admissible(self) -> None:
        if not (self.s_min < self.s < 1.0):
            raise AdmissibilityError(
                f"s = {self.s:g} is not admissible for p = {self.p:g}: "
                f"need s_min = {self.s_min:.12g} < s < 1"
            )


def growth_denominator(p: float, s: float) -> float:
    """4(2p-3)s - 4(2p-3) + (p+3)(1-s_c); positive exactly when s > s_min."""
    s_c = 1.5 - 2.0 / (p - 1.0)
    return 4.0 * (2.0 * p - 3.0) * (s - 1.0) + (p + 3.0) * (1.0 - s_c)


@dataclass(frozen=True)
class Exponents:
    s_c: float
    s_min: float
    energy_growth_exponent: float
    theorem_growth_exponent: float


def derived_exponents(ps: ParameterSet) -> Exponents:
    """Growth exponents for the energy of the low part and the H^s norm.

    energy_growth_exponent:  E_T grows at most like T^{(p+3)(1-s)/D};
    theorem_growth_exponent: sup_t ||u||_{H^s} grows at most like
    T^{2(1-s) + [7p-3-(6p-6)s](1-s)/(2D)}; D = growth_denominator(p, s).
    At p = 3 the norm exponent reduces algebraically to
    3(1-s)(2s-1)/(4s-3).
    """
    ps.require_admissible()
    p, s = ps.p, ps.s
    D = growth_denominator(p, s)
    energy_exp = (p + 3.0) * (1.0 - s) / D
    theorem_exp = 2.0 * (1.0 - s) + (7.0 * p - 3.0 - (6.0 * p - 6.0) * s) * (1.0 - s) / (2.0 * D)
    return Exponents(ps.s_c, ps.s_min, energy_exp, theorem_exp)
