"""Linear two-point boundary value problem u'' = sin(x) on (0, pi).

The canonical instance has u(0) = 1, u(pi) = pi + 1 and the exact solution
u(x) = -sin(x) + x + 1, which makes it the calibration example for the
whole band machinery: the leading truncation term is known in closed form,
so the band width profile has an analytic shape to compare against.
"""

import math
from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..bayes import RegressionProblem
from ..linalg import BandedMatrix
from .grid import Grid, uniform_grid

__all__ = [
    "LinearBvpModel",
    "linear_bvp_assemble",
    "linear_bvp_exact",
    "linear_bvp_truncation_leading",
    "linear_bvp_solve",
    "linear_bvp_regression",
]


@dataclass
class LinearBvpModel:
    grid: Grid

    @classmethod
    def canonical(cls, m: int = 99) -> "LinearBvpModel":
        return cls(uniform_grid(0.0, math.pi, m, boundary_lo=1.0, boundary_hi=math.pi + 1.0))

    @property
    def h(self) -> float:
        return float(self.grid.spacings[0])


def linear_bvp_assemble(mdl: LinearBvpModel) -> tuple[BandedMatrix, np.ndarray]:
    """The tridiagonal pair (A, F) of the centered-difference scheme.

    A holds the raw stencil (-2 on the diagonal, 1 off it); the 1/h^2
    factor stays symbolic, so the system actually solved is
    (1/h^2) A U = F, and F carries sin(x_j) with the boundary values
    folded in as -u(lo)/h^2 and -u(hi)/h^2 on the first and last rows.
    Uniform grids only.
    """
    if not mdl.grid.is_uniform():
        raise ValueError("linear_bvp_assemble: this model is uniform-grid only")
    m = mdl.grid.m
    h = mdl.h
    A = BandedMatrix.tridiagonal(np.ones(m - 1), np.full(m, -2.0), np.ones(m - 1))
    F = np.sin(mdl.grid.interior)
    F[0] -= mdl.grid.boundary_lo / h**2
    F[-1] -= mdl.grid.boundary_hi / h**2
    return A, F


def linear_bvp_exact(x):
    """u(x) = -sin(x) + x + 1."""
    return -np.sin(x) + np.asarray(x, dtype=float) + 1.0


def linear_bvp_truncation_leading(x, h: float):
    """Leading truncation term -(h^2 / 12) sin(x) of the centered scheme."""
    return -(h**2) / 12.0 * np.sin(x)


def linear_bvp_solve(mdl: LinearBvpModel) -> np.ndarray:
    """Finite difference solution: Thomas solve of A U = h^2 F."""
    A, F = linear_bvp_assemble(mdl)
    return linalg.thomas_solve(A, mdl.h**2 * F)


def linear_bvp_regression(mdl: LinearBvpModel) -> RegressionProblem:
    """Regression pair with X = (1/h^2) A and Y = F."""
    A, F = linear_bvp_assemble(mdl)
    return RegressionProblem(A.scaled(1.0 / mdl.h**2), F)
