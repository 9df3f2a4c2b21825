"""Posterior credible bands for banded regression problems.

A finite difference solve is read as the regression Y = X beta + eps with
a flat prior on beta and an inverse-gamma prior on the error variance.
The posterior for beta given sigma^2 is normal with mean (X'X)^-1 X'Y and
covariance sigma^2 (X'X)^-1; since every X here is square and invertible,
the mean is computed as the direct banded solve X mu = Y.

The band protocol: draw `draws` values of sigma^2 from the inverse-gamma
prior, draw one beta per sigma^2 from the conditional posterior, discard
the first `burn_in` beta draws, and report per-coordinate percentiles of
the rest.  The draws are i.i.d. (there is no chain), but the burn-in is
honored anyway because it is part of the protocol and costs little.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import linalg, randgen
from .linalg import BandedMatrix
from .randgen import RngState

__all__ = [
    "RegressionProblem",
    "PosteriorConfig",
    "PosteriorBand",
    "posterior_mean",
    "credible_band",
    "identity_diagnostic",
]

WIDTH_SCALE = 2.0 * 1.96  # width of a 95% normal interval per unit standard error

_CHUNK_TARGET = 4_000_000  # draws-by-coords elements per sampling chunk


@dataclass
class RegressionProblem:
    """The (X, Y) pair of one solve or one time step; X is square."""

    X: BandedMatrix
    Y: np.ndarray

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=float)
        if self.Y.shape != (self.X.n,):
            raise ValueError(
                f"RegressionProblem: len(Y)={self.Y.shape} does not match X.n={self.X.n}"
            )

    @property
    def m(self) -> int:
        return self.X.n


@dataclass(frozen=True)
class PosteriorConfig:
    """Sampling protocol parameters.

    `a` and `b` default to the problem-derived values a = m/2, b = a + 1
    when left as None; `resolved` fills them in.
    """

    draws: int = 50_500
    burn_in: int = 500
    a: float | None = None
    b: float | None = None
    q_low: float = 0.025
    q_high: float = 0.975
    seed: int = 0

    def __post_init__(self):
        if self.burn_in < 0 or self.draws <= self.burn_in:
            raise ValueError(
                f"PosteriorConfig: need 0 <= burn_in < draws, got draws={self.draws}, burn_in={self.burn_in}"
            )
        if not 0.0 < self.q_low < self.q_high < 1.0:
            raise ValueError(
                f"PosteriorConfig: need 0 < q_low < q_high < 1, got {self.q_low}, {self.q_high}"
            )
        if self.a is not None and self.a <= 0.0:
            raise ValueError(f"PosteriorConfig: a must be > 0, got {self.a}")
        if self.b is not None and self.b <= 0.0:
            raise ValueError(f"PosteriorConfig: b must be > 0, got {self.b}")

    def resolved(self, m: int) -> "PosteriorConfig":
        """Config with concrete prior parameters for an m-dimensional problem."""
        a = self.a if self.a is not None else m / 2.0
        b = self.b if self.b is not None else a + 1.0
        return replace(self, a=a, b=b)


@dataclass
class PosteriorBand:
    """Posterior mean plus pointwise lower/upper percentile curves."""

    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    width: np.ndarray
    scaled_width: np.ndarray
    config: PosteriorConfig


def posterior_mean(p: RegressionProblem) -> np.ndarray:
    """(X'X)^-1 X'Y, computed as the banded solve X mu = Y (X is square)."""
    return linalg.banded_solve(p.X, p.Y)


def credible_band(
    p: RegressionProblem,
    cfg: PosteriorConfig,
    rng: RngState | None = None,
    clamp: tuple[float, float] | None = None,
) -> PosteriorBand:
    """Posterior band for beta under the sampling protocol.

    Per draw t: sigma^2_t ~ IG(a, b), then beta_t = mu + sigma_t L^-T z_t
    with L L^T = X'X and z_t standard normal, so beta_t has the conditional
    posterior law N(mu, sigma^2_t (X'X)^-1).  After discarding the burn-in,
    the per-coordinate q_low/q_high percentiles give the band.  With a
    `clamp` range the reported limits are cut to it post hoc (for solutions
    with a physical range, e.g. probabilities), and the width is the width
    of the reported interval.

    Sampling is sequential from `rng` (defaults to RngState(cfg.seed)) and
    is reproducible bit-for-bit for a fixed seed; chunking is internal and
    does not affect the draw sequence.
    """
    m = p.m
    cfg = cfg.resolved(m)
    if rng is None:
        rng = RngState(cfg.seed)
    mu = posterior_mean(p)
    # L L^T = X^T X, via QR of X itself: clustered grids make the explicit
    # normal equations too ill-conditioned to factor in double precision
    L = linalg.gram_factor(p.X)

    sigma = np.sqrt(randgen.draw_inverse_gamma(rng, cfg.a, cfg.b, size=cfg.draws))
    kept = cfg.draws - cfg.burn_in
    samples = np.empty((m, kept))  # rows = coordinates, columns = kept draws

    chunk = max(1, min(cfg.draws, _CHUNK_TARGET // max(m, 1)))
    done = 0
    while done < cfg.draws:
        take = min(chunk, cfg.draws - done)
        z = randgen.draw_standard_normal(rng, take * m).reshape(take, m)
        v = linalg.solve_upper_banded(L, z.T)  # (m, take), columns are L^-T z_t
        beta = mu[:, None] + sigma[done:done + take][None, :] * v
        lo = max(done, cfg.burn_in)
        if lo < done + take:
            samples[:, lo - cfg.burn_in:done + take - cfg.burn_in] = beta[:, lo - done:]
        done += take

    lower = randgen.percentile_rows(samples, cfg.q_low)
    upper = randgen.percentile_rows(samples, cfg.q_high)
    if clamp is not None:
        lower = np.clip(lower, clamp[0], clamp[1])
        upper = np.clip(upper, clamp[0], clamp[1])
    width = upper - lower
    return PosteriorBand(
        mean=mu,
        lower=lower,
        upper=upper,
        width=width,
        scaled_width=width / WIDTH_SCALE,
        config=cfg,
    )


def identity_diagnostic(
    theta_hat: np.ndarray,
    cfg: PosteriorConfig,
    rng: RngState | None = None,
) -> PosteriorBand:
    """Band for the naive regression Y = theta_hat with X = I.

    With the identity design the posterior covariance is sigma^2 I, so the
    band carries no information about the discretization: its width is flat
    across coordinates and reflects sampling variation only.  Useful as a
    contrast to the Jacobian-weighted regression of the nonlinear models.
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_hat.ndim != 1 or theta_hat.size < 1:
        raise ValueError("identity_diagnostic: theta_hat must be a nonempty vector")
    problem = RegressionProblem(BandedMatrix.identity(theta_hat.size), theta_hat)
    return credible_band(problem, cfg, rng)
