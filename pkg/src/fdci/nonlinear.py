"""Newton iteration for nonlinear systems with tridiagonal Jacobians.

The nonlinear boundary value problems discretize to G(x) = 0 with a
tridiagonal J = dG/dx, so each Newton step is a single Thomas solve.
Plain undamped Newton, matching how the model problems are actually run:
the initial guesses are good, and non-convergence is a supported outcome
(the stiff interior-layer runs deliberately take the 500th iterate).
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .linalg import BandedMatrix

__all__ = ["NewtonConfig", "NewtonReport", "NewtonError", "newton_solve"]


@dataclass(frozen=True)
class NewtonConfig:
    """Stopping rule: sup-norm residual tolerance, iteration cap, and the
    policy when the cap is hit ("error" or "return-last-iterate")."""

    tol: float = 1e-14
    max_iter: int = 50
    on_nonconverge: str = "error"

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError(f"NewtonConfig: tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"NewtonConfig: max_iter must be >= 1, got {self.max_iter}")
        if self.on_nonconverge not in ("error", "return-last-iterate"):
            raise ValueError(
                f"NewtonConfig: unknown non-convergence policy {self.on_nonconverge!r}"
            )


@dataclass
class NewtonReport:
    """Outcome of one Newton run.

    `residual_norms[k]` is the sup-norm of G after update k + 1, so
    `iterations == len(residual_norms)`; the residual of the starting
    point is kept separately in `initial_residual`.
    """

    solution: np.ndarray
    residual_norms: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    initial_residual: float = float("nan")


class NewtonError(RuntimeError):
    """Newton failed (singular Jacobian, or no convergence under the
    "error" policy); carries the partial report."""

    def __init__(self, message: str, report: NewtonReport):
        super().__init__(message)
        self.report = report


def newton_solve(
    G: Callable[[np.ndarray], np.ndarray],
    J: Callable[[np.ndarray], BandedMatrix],
    x0: np.ndarray,
    cfg: NewtonConfig,
) -> NewtonReport:
    """Iterate x <- x - J(x)^-1 G(x) until sup-norm(G) <= tol or max_iter.

    Deterministic: identical inputs give an identical report.  A singular
    Jacobian raises :class:`NewtonError` naming the iteration; hitting
    max_iter follows cfg.on_nonconverge.
    """
    x = np.array(x0, dtype=float)
    report = NewtonReport(solution=x)
    r = float(np.max(np.abs(G(x)))) if x.size else 0.0
    report.initial_residual = r
    if r <= cfg.tol:
        report.converged = True
        return report

    for it in range(1, cfg.max_iter + 1):
        try:
            step = linalg.thomas_solve(J(x), G(x))
        except linalg.SingularMatrixError as exc:
            report.solution = x
            raise NewtonError(f"newton_solve: singular Jacobian at iteration {it}: {exc}", report) from exc
        x = x - step
        r = float(np.max(np.abs(G(x))))
        report.residual_norms.append(r)
        report.iterations = it
        report.solution = x
        if r <= cfg.tol:
            report.converged = True
            return report

    if cfg.on_nonconverge == "error":
        raise NewtonError(
            f"newton_solve: no convergence to {cfg.tol} within {cfg.max_iter} iterations "
            f"(last residual {r:.3e})",
            report,
        )
    return report
