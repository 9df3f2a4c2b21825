"""Crank-Nicolson scheme for allele fixation probabilities.

u(x, t) is the probability that an allele starting at frequency x is fixed
by generation t; it satisfies the backward equation

    du/dt = x(1-x)/(4 S_pop) u_xx + s x(1-x) u_x,
    u(0, t) = 0,  u(1, t) = 1,

stepped one generation at a time (dt = 1) on a frequency mesh of width
dx = 0.0005.  The Crank-Nicolson update is A u^{m+1} = B u^m + b with
tridiagonal A and B whose rows are fixed multiples of

    alpha_n = 1e-3 n (1 - 0.0005 n),

namely (-249.25, 1 + 500, -250.75) alpha_n for A and the sign-flipped
(249.25, 1 - 500, 250.75) alpha_n for B.  These row coefficients are the
ground truth of the scheme; they correspond to S_pop = 1000 and selection
coefficient s = 0.003, which are kept as documentation values only.
"""

from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..bayes import PosteriorBand, PosteriorConfig, RegressionProblem, credible_band
from ..linalg import BandedMatrix
from ..randgen import RngState

__all__ = [
    "FixationModel",
    "fixation_assemble",
    "fixation_run",
    "fixation_regression",
    "fixation_band",
    "fixation_value_at",
]

# row-coefficient multiples of alpha_n in the A (implicit) and B (explicit)
# halves of the Crank-Nicolson update
_SUB, _DIAG, _SUP = 249.25, 500.0, 250.75


@dataclass(frozen=True)
class FixationModel:
    n_space: int = 2000   # frequency subintervals; dx = 1 / n_space
    m_time: int = 6000    # generation cap

    @property
    def dx(self) -> float:
        return 1.0 / self.n_space

    @property
    def s_pop(self) -> float:
        """Population size implied by the hard-coded row coefficients."""
        return 1.0 / (4.0 * 2.0 * self.dx**2 * _DIAG)

    @property
    def selection(self) -> float:
        """Selection coefficient implied by the hard-coded row coefficients."""
        return 4.0 * self.dx * (_SUP - _SUB)

    @property
    def x_interior(self) -> np.ndarray:
        return self.dx * np.arange(1, self.n_space)

    def alpha(self) -> np.ndarray:
        # 2 x (1 - x); at the canonical dx this is exactly 1e-3 n (1 - 0.0005 n)
        x = self.x_interior
        return 2.0 * x * (1.0 - x)


def fixation_assemble(mdl: FixationModel) -> tuple[BandedMatrix, BandedMatrix, np.ndarray]:
    """The Crank-Nicolson triple (A, B, b) of A u^{m+1} = B u^m + b.

    b carries the boundary contributions; with u(0) = 0 and u(1) = 1 it is
    zero except for its last entry 2 * 250.75 * alpha_{N-1}.
    """
    a = mdl.alpha()
    A = BandedMatrix.tridiagonal(-_SUB * a[1:], 1.0 + _DIAG * a, -_SUP * a[:-1])
    B = BandedMatrix.tridiagonal(_SUB * a[1:], 1.0 - _DIAG * a, _SUP * a[:-1])
    b = np.zeros(mdl.n_space - 1)
    b[-1] = 2.0 * _SUP * a[-1]
    return A, B, b


def fixation_run(mdl: FixationModel, generations: int, keep_all: bool = False):
    """March u from the all-zero interior start for `generations` steps.

    Interior values start at zero (fixation at generation 0 only happens
    from frequency 1, which is the boundary).  Returns u^generations, or
    the full (generations + 1, N - 1) trajectory when keep_all is set.
    """
    if not 0 <= generations <= mdl.m_time:
        raise ValueError(f"fixation_run: generations must lie in [0, {mdl.m_time}], got {generations}")
    A, B, b = fixation_assemble(mdl)
    u = np.zeros(mdl.n_space - 1)
    history = [u.copy()] if keep_all else None
    for _ in range(generations):
        u = linalg.thomas_solve(A, linalg.band_matvec(B, u) + b)
        if keep_all:
            history.append(u.copy())
    return np.array(history) if keep_all else u


def fixation_regression(mdl: FixationModel, u_m: np.ndarray) -> RegressionProblem:
    """Regression pair (X = A, Y = B u^m + b) whose unknown is u^{m+1}."""
    u_m = np.asarray(u_m, dtype=float)
    A, B, b = fixation_assemble(mdl)
    return RegressionProblem(A, linalg.band_matvec(B, u_m) + b)


def fixation_band(
    mdl: FixationModel,
    u_m: np.ndarray,
    rng: RngState | None = None,
    cfg: PosteriorConfig | None = None,
) -> PosteriorBand:
    """Band for u^{m+1} given u^m, clamped to the probability range [0, 1]."""
    if cfg is None:
        cfg = PosteriorConfig()
    return credible_band(fixation_regression(mdl, u_m), cfg, rng, clamp=(0.0, 1.0))


def fixation_value_at(mdl: FixationModel, u: np.ndarray, p0: float) -> float:
    """u at initial frequency p0, which must be an interior grid node."""
    u = np.asarray(u, dtype=float)
    n = round(p0 / mdl.dx)
    if not 1 <= n <= mdl.n_space - 1 or abs(n * mdl.dx - p0) > 1e-12:
        raise ValueError(f"fixation_value_at: p0={p0} is not an interior grid node")
    return float(u[n - 1])
