"""The model problems: grids, scheme assembly, reference solutions, and
regression extraction for each supported equation."""

from .grid import Grid, clustered_grid, piecewise_grid, uniform_grid
from .linear_bvp import (
    LinearBvpModel,
    linear_bvp_assemble,
    linear_bvp_exact,
    linear_bvp_regression,
    linear_bvp_solve,
    linear_bvp_truncation_leading,
)
from .pendulum import (
    CANONICAL_CONSTANTS,
    PendulumModel,
    canonical_piecewise_segments,
    pendulum_assemble,
    pendulum_initial_guess,
    pendulum_regression,
    pendulum_solve,
)
from .interior_layer import (
    InteriorLayerModel,
    interior_assemble,
    interior_initial_guess,
    interior_perturbation_approx,
    interior_regression,
    interior_solve,
)
from .black_scholes import (
    BlackScholesModel,
    bs_assemble,
    bs_band_at_step,
    bs_exact,
    bs_exact_at_step,
    bs_initial_condition,
    bs_regression_at_step,
    bs_relative_error_proxy,
    bs_run,
    bs_step,
    bs_step_rhs,
)
from .fixation import (
    FixationModel,
    fixation_assemble,
    fixation_band,
    fixation_regression,
    fixation_run,
    fixation_value_at,
)

__all__ = [
    "Grid",
    "uniform_grid",
    "piecewise_grid",
    "clustered_grid",
    "LinearBvpModel",
    "linear_bvp_assemble",
    "linear_bvp_exact",
    "linear_bvp_truncation_leading",
    "linear_bvp_solve",
    "linear_bvp_regression",
    "PendulumModel",
    "CANONICAL_CONSTANTS",
    "canonical_piecewise_segments",
    "pendulum_assemble",
    "pendulum_initial_guess",
    "pendulum_solve",
    "pendulum_regression",
    "InteriorLayerModel",
    "interior_assemble",
    "interior_perturbation_approx",
    "interior_initial_guess",
    "interior_solve",
    "interior_regression",
    "BlackScholesModel",
    "bs_assemble",
    "bs_initial_condition",
    "bs_step",
    "bs_step_rhs",
    "bs_run",
    "bs_exact",
    "bs_exact_at_step",
    "bs_regression_at_step",
    "bs_band_at_step",
    "bs_relative_error_proxy",
    "FixationModel",
    "fixation_assemble",
    "fixation_run",
    "fixation_regression",
    "fixation_band",
    "fixation_value_at",
]
