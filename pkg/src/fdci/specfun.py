"""Special functions backing the closed-form reference solutions.

The pendulum boundary value problem has an exact trajectory in terms of the
Jacobi elliptic sine, and the option pricing model compares against the
closed-form call price, which needs the standard normal CDF.  Both are kept
here together with the small 2-D Newton solve that pins down the pendulum
trajectory constants from its boundary conditions.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PendulumConstants",
    "std_normal_cdf",
    "jacobi_sn",
    "complete_elliptic_k",
    "pendulum_exact",
    "pendulum_energy",
    "solve_pendulum_constants",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PendulumConstants:
    """Bottom-passage time and elliptic modulus of a pendulum trajectory."""

    t0: float
    k: float

    def __post_init__(self):
        if not 0.0 < self.k < 1.0:
            raise ValueError(f"PendulumConstants: k must lie in (0, 1), got {self.k}")


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _agm_scale(k: float) -> tuple[list, list]:
    """Descending Landen scale for modulus k: lists of a_n and c_n."""
    a = 1.0
    b = math.sqrt(1.0 - k * k)
    c = k
    a_seq = [a]
    c_seq = [c]
    while abs(c) > _EPS * a:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
        if len(a_seq) > 64:  # AGM is quadratic; this never triggers for k in [0, 1)
            break
    return a_seq, c_seq


def jacobi_sn(u: float, k: float) -> float:
    """Jacobi elliptic sine sn(u, k) for modulus 0 <= k <= 1.

    Computed by the arithmetic-geometric mean with descending Landen
    back-substitution of the amplitude.  The degenerate moduli reduce to
    sin (k=0) and tanh (k=1).
    """
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"jacobi_sn: modulus must lie in [0, 1], got {k}")
    if k == 0.0:
        return math.sin(u)
    if k == 1.0:
        return math.tanh(u)
    a_seq, c_seq = _agm_scale(k)
    n = len(a_seq) - 1
    phi = (2.0 ** n) * a_seq[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, c_seq[i] * math.sin(phi) / a_seq[i]))))
    return math.sin(phi)


def complete_elliptic_k(k: float) -> float:
    """Complete elliptic integral K(k) from the AGM of 1 and sqrt(1 - k^2)."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"complete_elliptic_k: modulus must lie in [0, 1), got {k}")
    a_seq, _ = _agm_scale(k)
    return math.pi / (2.0 * a_seq[-1])


def pendulum_exact(t: float, c: PendulumConstants) -> float:
    """Pendulum angle 2 asin(k sn(t - t0, k)) at time t."""
    s = c.k * jacobi_sn(t - c.t0, c.k)
    return 2.0 * math.asin(max(-1.0, min(1.0, s)))


def pendulum_energy(theta: float, theta_dot: float) -> float:
    """Conserved energy k^2 = 1/2 - cos(theta)/2 + theta_dot^2/4 (diagnostic)."""
    return 0.5 - 0.5 * math.cos(theta) + 0.25 * theta_dot * theta_dot


def solve_pendulum_constants(
    alpha: float,
    beta: float,
    T: float,
    guess: PendulumConstants,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> PendulumConstants:
    """Find (t0, k) so the exact trajectory meets theta(0)=alpha, theta(T)=beta.

    Plain 2-D Newton with a central finite-difference Jacobian; k is kept
    inside (0, 1) while iterating.  Raises RuntimeError if the residual
    sup-norm does not reach `tol` within `max_iter` iterations.
    """

    def residual(t0: float, k: float) -> np.ndarray:
        c = PendulumConstants(t0, k)
        return np.array([pendulum_exact(0.0, c) - alpha, pendulum_exact(T, c) - beta])

    t0, k = guess.t0, guess.k
    step = 1e-7
    for _ in range(max_iter):
        f = residual(t0, k)
        if np.max(np.abs(f)) <= tol:
            return PendulumConstants(t0, k)
        dk = min(step, 0.5 * min(k, 1.0 - k))
        jac = np.empty((2, 2))
        jac[:, 0] = (residual(t0 + step, k) - residual(t0 - step, k)) / (2.0 * step)
        jac[:, 1] = (residual(t0, k + dk) - residual(t0, k - dk)) / (2.0 * dk)
        try:
            delta = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError("solve_pendulum_constants: singular Jacobian") from exc
        t0 -= delta[0]
        k = min(max(k - delta[1], 1e-12), 1.0 - 1e-12)
    raise RuntimeError(
        f"solve_pendulum_constants: no convergence to {tol} in {max_iter} iterations"
    )
