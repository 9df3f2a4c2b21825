"""Three-point difference stencils on possibly non-uniform grids.

For interior node i with left gap hm = x_i - x_{i-1} and right gap
hp = x_{i+1} - x_i:

    u''(x_i) ~ 2 [ u_{i-1} / (hm (hm+hp)) - u_i / (hm hp) + u_{i+1} / (hp (hm+hp)) ]
    u'(x_i)  ~ (u_{i+1} - u_{i-1}) / (hm + hp)

Both reduce to the familiar centered formulas 1/h^2 (.., -2, ..) and
(u_{i+1} - u_{i-1}) / 2h when hm = hp = h.
"""

import numpy as np

__all__ = ["second_diff_coeffs", "first_diff_denominator"]


def second_diff_coeffs(nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c_minus, c_center, c_plus) for u'' at every interior node."""
    h = np.diff(np.asarray(nodes, dtype=float))
    hm = h[:-1]
    hp = h[1:]
    total = hm + hp
    return 2.0 / (hm * total), -2.0 / (hm * hp), 2.0 / (hp * total)


def first_diff_denominator(nodes: np.ndarray) -> np.ndarray:
    """hm + hp at every interior node (the centered u' divisor)."""
    h = np.diff(np.asarray(nodes, dtype=float))
    return h[:-1] + h[1:]
