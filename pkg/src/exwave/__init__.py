"""exwave: spectral lab for the radial defocusing wave equation outside a ball.

The exterior Dirichlet problem on r in [1, 1+L] is diagonalized by a
sine-kernel transform (type-I DST on g = r*u), which makes the linear flow
exact and every frequency-side operation (projections, fractional norms,
multipliers) a pointwise multiplication.  On top of that sit a Strang
nonlinear solver, the high/low truncation evolution, and a harness that
measures the dispersive, Bernstein, radial-Sobolev, and growth-exponent
estimates the construction is supposed to obey.
"""

from .calculus import (
    Exponents,
    ParameterSet,
    apply_multiplier,
    besov_norm,
    cutoff,
    derived_exponents,
    dyadic_band,
    energy,
    lp_high,
    lp_low,
    lp_project,
    sobolev_norm,
)
from .data import bump_field, bump_profile, mode_field, rough_pair, spectral_mode
from .dynamics import (
    CoupledReport,
    StepperConfig,
    Trajectory,
    decomposition_defect,
    difference_force,
    linear_flow,
    nonlinearity,
    solve_coupled,
    solve_difference_direct,
    solve_nlw,
    step,
    t_window,
)
from .errors import (
    AdmissibilityError,
    BandError,
    ConfigurationError,
    GuardError,
    InputError,
    NumericalFailure,
)
from .grid import (
    RadialField,
    RadialGrid,
    WaveState,
    lp_norm,
    make_grid,
    sample,
    support_radius,
    weighted_sup,
    zero_field,
)
from .harness import (
    FitResult,
    StrichartzPair,
    TruncationTable,
    fit_power_law,
    measure_dispersive_decay,
    strichartz_norm,
    truncation_experiment,
    verify_bernstein,
    verify_radial_sobolev,
)
from .transform import SpectralField, forward, inverse, plancherel_defect

__version__ = "0.1.0"
