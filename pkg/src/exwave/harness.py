"""Empirical verification of the quantitative estimates.

Every experiment here is one-sided in spirit: it measures ratios or fitted
growth rates for a seeded random family and checks them against the stated
exponent with explicit slack, never asserting sharp constants.  All reports
are deterministic given (seed, grid, parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import ParameterSet, besov_norm, lp_project, sobolev_norm
from .data import power_density_field, random_bumps
from .dynamics import CoupledReport, StepperConfig, Trajectory, linear_flow, solve_coupled, t_window
from .errors import ConfigurationError, InputError
from .grid import RadialField, RadialGrid, lp_norm, make_grid, support_radius, weighted_sup


@dataclass
class FitResult:
    """Least-squares power-law fit on log-log pairs."""

    slope: float
    intercept: float
    residual: float
    count: int


def fit_power_law(series) -> FitResult:
    """Fit y = C * x^slope by least squares in log-log coordinates."""
    pts = [(float(x), float(y)) for x, y in series]
    if len(pts) < 3:
        raise InputError(f"power-law fit needs at least 3 points, got {len(pts)}")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise InputError("power-law fit requires strictly positive samples")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = ly - (slope * lx + intercept)
    return FitResult(slope, intercept, float(np.sqrt(np.mean(resid**2))), len(pts))


@dataclass(frozen=True)
class StrichartzPair:
    """Mixed-norm exponents (q in time, rx in space) with wave weights.

    beta = gamma = 1 - 2/rx are the regularity weight and decay rate of the
    dispersive bound at this spatial integrability.
    """

    q: float
    rx: float

    def __post_init__(self):
        if self.q < 2 or self.rx < 2:
            raise ConfigurationError(f"Strichartz exponents need q, rx >= 2, got ({self.q}, {self.rx})")

    @property
    def beta(self) -> float:
        return 1.0 - 2.0 / self.rx

    @property
    def gamma(self) -> float:
        return 1.0 - 2.0 / self.rx

    def admissibility_defect(self, rho: float, mu: float) -> float:
        """rho + 3(1/2 - 1/rx) - 1/q - mu; zero for admissible triples."""
        return rho + 3.0 * (0.5 - 1.0 / self.rx) - 1.0 / self.q - mu

    @classmethod
    def endpoint(cls, rx: float) -> "StrichartzPair":
        """The L^2_t family member at spatial exponent rx (requires rx > 4)."""
        if not rx > 4:
            raise ConfigurationError(f"endpoint family needs rx > 4, got {rx}")
        return cls(q=2.0, rx=rx)

    @property
    def endpoint_regularity(self) -> float:
        """Data regularity s = 1 - 3/rx paired with the endpoint estimate."""
        return 1.0 - 3.0 / self.rx


# ---------------------------------------------------------------------------
# radial Sobolev
# ---------------------------------------------------------------------------

@dataclass
class RadialSobolevReport:
    p: float
    trials: int
    max_ratio: float
    per_width: dict = field(default_factory=dict)
    skipped: int = 0


def verify_radial_sobolev(
    p: float,
    trials: int,
    seed: int,
    grid: RadialGrid | None = None,
    widths=(0.1, 0.2, 0.5, 1.0, 2.0),
) -> RadialSobolevReport:
    """Measure max of r^{4/(p+2)}|u| / (||u||_p^{p/(p+2)} ||u||_{H^1}^{2/(p+2)}).

    Trials are split evenly across the bump-width family; each trial is a
    random superposition of 1-5 bumps at that width.
    """
    if p < 1:
        raise ConfigurationError(f"exponent p must be >= 1, got {p!r}")
    if grid is None:
        grid = make_grid(20.0, 2048)
    rng = np.random.default_rng(seed)
    alpha = 4.0 / (p + 2.0)
    a_exp = p / (p + 2.0)
    b_exp = 2.0 / (p + 2.0)
    per_width: dict[float, float] = {}
    skipped = 0
    per_trial = max(1, trials // len(widths))
    for sigma in widths:
        worst = 0.0
        for _ in range(per_trial):
            f = random_bumps(grid, rng, centers=(1.0 + 2.0 * sigma, min(8.0, grid.L / 2.0)), widths=sigma)
            lhs = weighted_sup(f, alpha)
            if lhs == 0.0:
                skipped += 1
                continue
            rhs = lp_norm(f, p) ** a_exp * sobolev_norm(f, 1.0) ** b_exp
            worst = max(worst, lhs / rhs)
        per_width[float(sigma)] = worst
    return RadialSobolevReport(
        p=p,
        trials=per_trial * len(widths),
        max_ratio=max(per_width.values()),
        per_width=per_width,
        skipped=skipped,
    )


# ---------------------------------------------------------------------------
# Bernstein
# ---------------------------------------------------------------------------

def bernstein_ratios(
    q_from: float,
    q_to: float,
    Ns,
    trials: int,
    seed: int,
    grid: RadialGrid | None = None,
) -> dict[float, float]:
    """Worst-case ratio ||P_N f||_{q_to} / ||f||_{q_from} over trials, per dyadic N.

    Probe fields carry the critical spectral density lam^{e - 1/2} with
    random signs, e = 3(1/q_from - 1/q_to): the dyadic mass distribution
    that exercises the stated growth rate.  For the sup-norm case e = 3/2
    this is exactly a white 3D power spectrum.  Taking the max over trials
    matches the upper-bound character of the inequality.
    """
    if q_from > q_to:
        raise ConfigurationError(f"need q_from <= q_to, got ({q_from}, {q_to})")
    if grid is None:
        grid = make_grid(40.0, 8192)
    e = 3.0 * (1.0 / q_from - 1.0 / q_to)
    rng = np.random.default_rng(seed)
    Ns = [float(N) for N in Ns]
    worst = {N: 0.0 for N in Ns}
    for _ in range(trials):
        f = power_density_field(grid, e - 0.5, rng)
        denom = lp_norm(f, q_from)
        for N in Ns:
            num = lp_norm(lp_project(f, N), q_to)
            worst[N] = max(worst[N], num / denom)
    return worst


def verify_bernstein(
    q_from: float,
    q_to: float,
    Ns,
    trials: int,
    seed: int,
    grid: RadialGrid | None = None,
) -> FitResult:
    """Fit the dyadic growth of ||P_N f||_{q_to}/||f||_{q_from} against N.

    The fitted slope is compared by the caller with 3(1/q_from - 1/q_to).
    """
    ratios = bernstein_ratios(q_from, q_to, Ns, trials, seed, grid)
    return fit_power_law(sorted(ratios.items()))


# ---------------------------------------------------------------------------
# dispersive decay and mixed norms
# ---------------------------------------------------------------------------

def measure_dispersive_decay(
    f0: RadialField,
    pair: StrichartzPair | None,
    times,
) -> FitResult:
    """Fit the decay of the free evolution from (f0, 0) over the given times.

    pair = None (or rx = inf) measures the grid sup norm; otherwise the
    Besov norm of order -beta(rx) with spatial exponent rx.  All times must
    sit inside the reflection-free window max(t) < L - support radius.
    """
    times = sorted(float(t) for t in times)
    if not times or times[0] <= 0:
        raise ConfigurationError("decay measurement needs positive times")
    grid = f0.grid
    radius = support_radius(f0)
    if times[-1] >= grid.L - radius:
        raise ConfigurationError(
            f"decay window violated: max time {times[-1]:g} >= L - support radius "
            f"= {grid.L - radius:.3g}"
        )
    zero = RadialField(grid, np.zeros(grid.N))
    pts = []
    for t in times:
        st = linear_flow(f0, zero, t)
        if pair is None or pair.rx == math.inf:
            val = lp_norm(st.u, math.inf)
        else:
            val = besov_norm(st.u, -pair.beta, pair.rx, 2.0)
        pts.append((t, val))
    return fit_power_law(pts)


def strichartz_norm(traj: Trajectory, pair: StrichartzPair) -> float:
    """Windowed mixed norm (int ||u(t)||_{L^rx}^q dt)^{1/q} over the samples.

    Time quadrature is the trapezoid rule at the trajectory's stride; the
    trajectory must carry snapshots.
    """
    if traj.states is None or not traj.states:
        raise InputError("strichartz_norm needs a trajectory with stored states")
    vals = np.asarray([lp_norm(st.u, pair.rx) for st in traj.states])
    times = np.asarray(traj.times)
    if pair.q == math.inf:
        return float(vals.max())
    return float(np.trapezoid(vals**pair.q, times) ** (1.0 / pair.q))


# ---------------------------------------------------------------------------
# truncation experiment
# ---------------------------------------------------------------------------

TABLE_COLUMNS = (
    "J",
    "T",
    "E0_v",
    "E_T",
    "sup_hs_u",
    "sup_hsc_w",
    "st_w_L2Lq",
    "fitted_ET_slope",
    "fitted_hs_slope",
)


@dataclass
class TruncationTable:
    """Per-J rows plus the two fitted growth slopes of the scan."""

    p: float
    s: float
    rows: list[dict]
    fitted_ET_slope: float
    fitted_hs_slope: float
    reports: list[CoupledReport]

    def as_rows(self) -> list[dict]:
        out = []
        for row in self.rows:
            full = dict(row)
            full["fitted_ET_slope"] = self.fitted_ET_slope
            full["fitted_hs_slope"] = self.fitted_hs_slope
            out.append(full)
        return out


def truncation_experiment(
    p: float,
    s: float,
    J_list,
    u0: RadialField,
    u1: RadialField,
    cfg: StepperConfig,
    T: float | None = None,
) -> TruncationTable:
    """Run the coupled evolution for each J on its window and fit the growth.

    T = None uses the per-J window t_window(ps); an explicit T overrides it
    for every J.  Fits: log2(E_T) against J (energy-growth check) and
    log(sup ||u||_{H^s}) against log T (norm-growth check).
    """
    J_list = sorted(int(J) for J in J_list)
    if not J_list:
        raise ConfigurationError("truncation experiment needs at least one J")
    rows = []
    reports = []
    for J in J_list:
        ps = ParameterSet(p=p, s=s, J=J)
        ps.require_admissible()
        TJ = t_window(ps) if T is None else float(T)
        rep = solve_coupled(u0, u1, ps, TJ, cfg)
        reports.append(rep)
        rows.append(
            {
                "J": J,
                "T": rep.T,
                "E0_v": rep.E_v0,
                "E_T": rep.E_T,
                "sup_hs_u": rep.sup_hs_u,
                "sup_hsc_w": rep.sup_hsc_w,
                "st_w_L2Lq": rep.strichartz["st_w_L2Lq"],
            }
        )
    if len(rows) >= 2:
        js = np.asarray([row["J"] for row in rows], dtype=float)
        log2_et = np.log2([row["E_T"] for row in rows])
        et_slope = float(np.polyfit(js, log2_et, 1)[0])
    else:
        et_slope = 0.0
    if len(rows) >= 3 and T is None:
        hs_fit = fit_power_law([(row["T"], row["sup_hs_u"]) for row in rows])
        hs_slope = hs_fit.slope
    else:
        hs_slope = 0.0
    return TruncationTable(p=p, s=s, rows=rows, fitted_ET_slope=et_slope, fitted_hs_slope=hs_slope, reports=reports)
