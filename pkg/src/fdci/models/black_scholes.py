"""Implicit finite differences for the European call under Black-Scholes.

After the change of variables t = T - tau (so t counts time since expiry
and the payoff becomes an initial condition) the pricing PDE is

    dV/dt = (1/2) sigma^2 S^2 V_SS + r S V_S - r V,
    V(S, 0) = max(S - E, 0),  V(0, t) = 0,  V(S, t) -> S - E exp(-r t).

The fully implicit step solves A v^{m+1} = b^m with the tridiagonal A built
from alpha = sigma^2 dt and beta = r dt.  Row n carries

    sub:   (beta n - alpha n^2) / 2        (coefficient of v_{n-1})
    diag:  1 + beta + alpha n^2
    super: -(beta n + alpha n^2) / 2       (coefficient of v_{n+1})

so the interior row sum is 1 + beta.  Each step is also a regression
A V^{m+1} = b^m + error, giving a band for the next price vector; since
the exact call price is available, the band-based relative-error proxy
width / (D + 1) can be validated against the true relative error.
"""

import math
from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..bayes import PosteriorBand, PosteriorConfig, RegressionProblem, credible_band
from ..linalg import BandedMatrix
from ..randgen import RngState
from ..specfun import std_normal_cdf

__all__ = [
    "BlackScholesModel",
    "bs_assemble",
    "bs_initial_condition",
    "bs_step",
    "bs_run",
    "bs_step_rhs",
    "bs_exact",
    "bs_exact_at_step",
    "bs_regression_at_step",
    "bs_band_at_step",
    "bs_relative_error_proxy",
]


@dataclass(frozen=True)
class BlackScholesModel:
    T: float = 0.25          # expiry (years)
    E: float = 10.0          # exercise price
    r: float = 0.1           # interest rate (1/year)
    sigma: float = 0.4       # volatility (1/sqrt(year))
    s_max: float = 40.0      # price cap replacing the infinite domain
    n_space: int = 200       # price subintervals
    m_time: int = 2000       # time subintervals

    def __post_init__(self):
        if self.n_space < 3:
            raise ValueError(f"BlackScholesModel: need n_space >= 3, got {self.n_space}")
        if min(self.T, self.E, self.sigma, self.s_max) <= 0 or self.m_time < 1:
            raise ValueError("BlackScholesModel: T, E, sigma, s_max, m_time must be positive")

    @property
    def ds(self) -> float:
        return self.s_max / self.n_space

    @property
    def dt(self) -> float:
        return self.T / self.m_time

    @property
    def alpha(self) -> float:
        return self.sigma**2 * self.dt

    @property
    def beta(self) -> float:
        return self.r * self.dt

    @property
    def s_interior(self) -> np.ndarray:
        """S at the interior nodes n = 1 .. N-1."""
        return self.ds * np.arange(1, self.n_space)


def bs_assemble(mdl: BlackScholesModel) -> BandedMatrix:
    """The (N-1) x (N-1) implicit-step matrix A."""
    n = np.arange(1, mdl.n_space)
    a, b = mdl.alpha, mdl.beta
    diag = 1.0 + b + a * n**2
    sub = 0.5 * (b * n[1:] - a * n[1:] ** 2)      # row n, coefficient of v_{n-1}
    sup = -0.5 * (b * n[:-1] + a * n[:-1] ** 2)   # row n, coefficient of v_{n+1}
    return BandedMatrix.tridiagonal(sub, diag, sup)


def bs_initial_condition(mdl: BlackScholesModel) -> np.ndarray:
    """Payoff at expiry, v^0_n = max(n dS - E, 0), on the interior nodes."""
    return np.maximum(mdl.s_interior - mdl.E, 0.0)


def _upper_boundary(mdl: BlackScholesModel, step: int) -> float:
    """v_N at time step `step`: s_max - E exp(-r t) with t the time to expiry."""
    return mdl.s_max - mdl.E * math.exp(-mdl.r * step * mdl.dt)


def bs_step_rhs(mdl: BlackScholesModel, v_m: np.ndarray, m: int) -> np.ndarray:
    """Right-hand side b^m for the step to v^{m+1}.

    b^m is v^m with the boundary neighbors folded in: the first row drops
    the v_0 = 0 term, the last row gains (beta (N-1) + alpha (N-1)^2)/2
    times the upper boundary value at step m + 1.
    """
    v_m = np.asarray(v_m, dtype=float)
    if v_m.shape != (mdl.n_space - 1,):
        raise ValueError(f"bs_step_rhs: v has shape {v_m.shape}, expected ({mdl.n_space - 1},)")
    b = v_m.copy()
    ntop = mdl.n_space - 1
    b[-1] += 0.5 * (mdl.beta * ntop + mdl.alpha * ntop**2) * _upper_boundary(mdl, m + 1)
    return b


def bs_step(mdl: BlackScholesModel, A: BandedMatrix, v_m: np.ndarray, m: int) -> np.ndarray:
    """One implicit step: solve A v^{m+1} = b^m."""
    return linalg.thomas_solve(A, bs_step_rhs(mdl, v_m, m))


def bs_run(mdl: BlackScholesModel, steps: int) -> np.ndarray:
    """March the payoff forward `steps` time steps; returns v^steps."""
    if not 0 <= steps <= mdl.m_time:
        raise ValueError(f"bs_run: steps must lie in [0, {mdl.m_time}], got {steps}")
    A = bs_assemble(mdl)
    v = bs_initial_condition(mdl)
    for m in range(steps):
        v = bs_step(mdl, A, v, m)
    return v


def bs_exact(mdl: BlackScholesModel, S: float, t: float) -> float:
    """Closed-form call price at asset price S and calendar time t < T.

    V = S Phi(d1) - E exp(-r (T - t)) Phi(d2) with d1, d2 using
    sigma sqrt(T - t) in the denominator.
    """
    if S < 0.0:
        raise ValueError(f"bs_exact: S must be >= 0, got {S}")
    tau = mdl.T - t
    if tau <= 0.0:
        raise ValueError(f"bs_exact: need t < T, got t={t}")
    if S == 0.0:
        return 0.0
    vol = mdl.sigma * math.sqrt(tau)
    d1 = (math.log(S / mdl.E) + (mdl.r + 0.5 * mdl.sigma**2) * tau) / vol
    d2 = d1 - vol
    return S * std_normal_cdf(d1) - mdl.E * math.exp(-mdl.r * tau) * std_normal_cdf(d2)


def bs_exact_at_step(mdl: BlackScholesModel, step: int) -> np.ndarray:
    """Exact prices on the interior nodes at the scheme's step `step`.

    Step m of the marching variable sits m dt before expiry, i.e. at
    calendar time T - m dt in the closed-form convention.
    """
    t = mdl.T - step * mdl.dt
    return np.array([bs_exact(mdl, S, t) for S in mdl.s_interior])


def bs_regression_at_step(mdl: BlackScholesModel, target_step: int) -> RegressionProblem:
    """Regression pair (X = A, Y = b^{target_step - 1}) whose unknown is v^{target_step}."""
    if target_step < 1:
        raise ValueError(f"bs_regression_at_step: target_step must be >= 1, got {target_step}")
    v_prev = bs_run(mdl, target_step - 1)
    return RegressionProblem(bs_assemble(mdl), bs_step_rhs(mdl, v_prev, target_step - 1))


def bs_band_at_step(
    mdl: BlackScholesModel,
    target_step: int,
    cfg: PosteriorConfig,
    rng: RngState | None = None,
) -> PosteriorBand:
    """Posterior band for the price vector v^{target_step}."""
    return credible_band(bs_regression_at_step(mdl, target_step), cfg, rng)


def bs_relative_error_proxy(band: PosteriorBand, mode: str = "mean") -> np.ndarray:
    """Band-based stand-in for the relative error: width / (D + 1).

    D is the posterior mean ("mean" mode) or the sum of the band limits
    ("limit-sum" mode); the +1 keeps the division safe where the solution
    is near zero.
    """
    if mode == "mean":
        denom = band.mean
    elif mode == "limit-sum":
        denom = band.lower + band.upper
    else:
        raise ValueError(f"bs_relative_error_proxy: unknown mode {mode!r}")
    return band.width / (denom + 1.0)
