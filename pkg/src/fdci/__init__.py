"""Finite difference solvers with Bayesian credible bands.

Each supported model problem is solved by a classic banded finite
difference scheme and, alongside the numerical solution, reported with
pointwise credible bands obtained from a regression reading of the scheme.
The band width tracks the truncation error and drives adaptive grid
refinement.
"""

from .adaptive import RefineHistory, RefinePolicy, adapt_loop, flag_intervals, refine
from .bayes import (
    PosteriorBand,
    PosteriorConfig,
    RegressionProblem,
    credible_band,
    identity_diagnostic,
    posterior_mean,
)
from .linalg import (
    BandedCholeskyFactor,
    BandedMatrix,
    NotPositiveDefiniteError,
    SingularMatrixError,
    band_matvec,
    banded_cholesky,
    normal_equations,
    solve_lower_banded,
    solve_upper_banded,
    thomas_solve,
)
from .nonlinear import NewtonConfig, NewtonError, NewtonReport, newton_solve
from .randgen import (
    PercentileSpec,
    RngState,
    draw_gamma,
    draw_inverse_gamma,
    draw_standard_normal,
    percentile,
)
from .specfun import (
    PendulumConstants,
    jacobi_sn,
    pendulum_exact,
    solve_pendulum_constants,
    std_normal_cdf,
)
from . import models

__version__ = "0.1.0"
