import numpy as np
import pytest

from fdci.linalg import BandedMatrix


def random_dominant_tridiagonal(rng: np.random.Generator, n: int) -> BandedMatrix:
    """Tridiagonal with off-diagonals in [-1, 1] and the diagonal scaled to
    strict dominance (diagonal magnitude in [1, 2] times the row's off-diagonal
    sum plus a margin)."""
    sub = rng.uniform(-1.0, 1.0, size=max(n - 1, 0))
    sup = rng.uniform(-1.0, 1.0, size=max(n - 1, 0))
    diag = np.zeros(n)
    for i in range(n):
        row = (abs(sub[i - 1]) if i > 0 else 0.0) + (abs(sup[i]) if i < n - 1 else 0.0)
        diag[i] = (row + 1.0) * rng.uniform(1.0, 2.0) * rng.choice([-1.0, 1.0])
    return BandedMatrix.tridiagonal(sub, diag, sup)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240817)
