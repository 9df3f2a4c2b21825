"""Singularly perturbed problem delta u'' + u (u' - 1) = 0 with an interior layer.

For small delta the solution follows the line x + gamma1 - a near the left
end and x + gamma2 - b near the right end, joined by a layer of width
O(delta) whose location comes out of perturbation analysis:

    u(x) ~ x - xbar + w0 tanh(w0 (x - xbar) / (2 delta)),
    w0 = (a - b + gamma2 - gamma1) / 2,  xbar = (a + b - gamma1 - gamma2) / 2.

On a uniform coarse grid Newton may fail to settle for small delta; the
runs here deliberately keep the 500th iterate in that case, because the
band computed from it still localizes the layer and tells you where to
put more points.
"""

from dataclasses import dataclass, replace

import numpy as np

from .. import linalg
from ..bayes import RegressionProblem
from ..linalg import BandedMatrix
from ..nonlinear import NewtonConfig, NewtonReport, newton_solve
from ._stencil import first_diff_denominator, second_diff_coeffs
from .grid import Grid, uniform_grid

__all__ = [
    "InteriorLayerModel",
    "interior_assemble",
    "interior_perturbation_approx",
    "interior_initial_guess",
    "interior_solve",
    "interior_regression",
]


@dataclass
class InteriorLayerModel:
    grid: Grid
    delta: float = 0.01
    gamma1: float = -1.0
    gamma2: float = 1.5

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError(f"InteriorLayerModel: delta must be > 0, got {self.delta}")

    @classmethod
    def canonical(cls, m: int = 200, delta: float = 0.01) -> "InteriorLayerModel":
        return cls(
            uniform_grid(0.0, 1.0, m, boundary_lo=-1.0, boundary_hi=1.5),
            delta=delta,
        )

    @property
    def w0(self) -> float:
        return 0.5 * (self.grid.lo - self.grid.hi + self.gamma2 - self.gamma1)

    @property
    def xbar(self) -> float:
        return 0.5 * (self.grid.lo + self.grid.hi - self.gamma1 - self.gamma2)

    # --- hooks used by the adaptive refinement loop ---

    def with_grid(self, grid: Grid) -> "InteriorLayerModel":
        return replace(self, grid=grid)

    def solve(self, cfg: NewtonConfig | None = None) -> np.ndarray:
        return interior_solve(self, cfg).solution

    def regression(self, solution: np.ndarray) -> RegressionProblem:
        return interior_regression(self, solution)

    def reference_values(self, x: np.ndarray) -> np.ndarray:
        return interior_perturbation_approx(self, x)


def interior_assemble(mdl: InteriorLayerModel, U: np.ndarray) -> tuple[np.ndarray, BandedMatrix]:
    """Residual G and tridiagonal Jacobian J at the interior values U.

    G_i = delta * D2_i(U) + U_i (D1_i(U) - 1) with the three-point second
    difference D2 and centered first difference D1; on a uniform grid the
    Jacobian rows reduce to

        (delta/h^2 - U_i/2h,  -2 delta/h^2 + (D1_i - 1),  delta/h^2 + U_i/2h).
    """
    U = np.asarray(U, dtype=float)
    m = mdl.grid.m
    if U.shape != (m,):
        raise ValueError(f"interior_assemble: U has shape {U.shape}, expected ({m},)")
    cm, c0, cp = second_diff_coeffs(mdl.grid.nodes)
    denom = first_diff_denominator(mdl.grid.nodes)
    full = np.concatenate([[mdl.gamma1], U, [mdl.gamma2]])
    d1 = (full[2:] - full[:-2]) / denom
    G = mdl.delta * (cm * full[:-2] + c0 * full[1:-1] + cp * full[2:]) + U * (d1 - 1.0)
    sub = mdl.delta * cm[1:] - U[1:] / denom[1:]
    diag = mdl.delta * c0 + (d1 - 1.0)
    sup = mdl.delta * cp[:-1] + U[:-1] / denom[:-1]
    return G, BandedMatrix.tridiagonal(sub, diag, sup)


def interior_perturbation_approx(mdl: InteriorLayerModel, x) -> np.ndarray:
    """Matched-asymptotics approximation x - xbar + w0 tanh(w0 (x - xbar) / 2 delta)."""
    x = np.asarray(x, dtype=float)
    return x - mdl.xbar + mdl.w0 * np.tanh(mdl.w0 * (x - mdl.xbar) / (2.0 * mdl.delta))


def interior_initial_guess(mdl: InteriorLayerModel) -> np.ndarray:
    """Perturbation approximation sampled at the interior nodes."""
    return interior_perturbation_approx(mdl, mdl.grid.interior)


def interior_solve(mdl: InteriorLayerModel, cfg: NewtonConfig | None = None) -> NewtonReport:
    """Newton from the perturbation-analysis starting values.

    The default keeps the last iterate after 500 steps instead of raising:
    for small delta on a coarse uniform grid the iteration may cycle, and
    the last iterate is exactly what the band is computed from.
    """
    if cfg is None:
        cfg = NewtonConfig(tol=1e-14, max_iter=500, on_nonconverge="return-last-iterate")
    return newton_solve(
        lambda u: interior_assemble(mdl, u)[0],
        lambda u: interior_assemble(mdl, u)[1],
        interior_initial_guess(mdl),
        cfg,
    )


def interior_regression(mdl: InteriorLayerModel, U_hat: np.ndarray) -> RegressionProblem:
    """Regression pair X = J(U_hat), Y = J(U_hat) U_hat."""
    _, J = interior_assemble(mdl, U_hat)
    return RegressionProblem(J, linalg.band_matvec(J, np.asarray(U_hat, dtype=float)))
