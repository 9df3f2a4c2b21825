"""Seedable sampling primitives for the posterior protocol.

All randomness flows through an explicit :class:`RngState`; there is no
hidden global generator.  A state is identified by (seed, stream): the same
pair always reproduces the same draw sequence, and independent substreams
for chunked/parallel sampling are derived with :meth:`RngState.substream`.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RngState",
    "PercentileSpec",
    "draw_standard_normal",
    "draw_gamma",
    "draw_inverse_gamma",
    "percentile",
]


class RngState:
    """Explicit random state: a seeded generator plus its stream id.

    Draw functions advance the state in place.  Two states built from the
    same (seed, stream) produce identical sequences; distinct streams are
    statistically independent.
    """

    __slots__ = ("seed", "stream", "_gen")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self._gen = np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        )

    def substream(self, index: int) -> "RngState":
        """Fresh independent state for chunk `index`, derived from the seed."""
        return RngState(self.seed, stream=self.stream + 1 + int(index))

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, stream={self.stream})"


@dataclass(frozen=True)
class PercentileSpec:
    """A probability level in (0, 1)."""

    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"PercentileSpec: q must lie in (0, 1), got {self.q}")


def draw_standard_normal(rng: RngState, n: int) -> np.ndarray:
    """n independent N(0, 1) variates; advances rng."""
    if n < 1:
        raise ValueError(f"draw_standard_normal: n must be >= 1, got {n}")
    return rng._gen.standard_normal(n)


def draw_gamma(rng: RngState, shape: float, size: int | None = None):
    """Gamma(shape, rate=1) variates; scalar when size is None."""
    if shape <= 0.0:
        raise ValueError(f"draw_gamma: shape must be > 0, got {shape}")
    return rng._gen.standard_gamma(shape, size=size)


def draw_inverse_gamma(rng: RngState, a: float, b: float, size: int | None = None):
    """Inverse-gamma variates with density proportional to x^(-a-1) exp(-b/x).

    Shape-scale parameterization: X = b / Gamma(a, rate=1).
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"draw_inverse_gamma: parameters must be > 0, got a={a}, b={b}")
    return b / rng._gen.standard_gamma(a, size=size)


def percentile(samples: np.ndarray, spec) -> float:
    """Order-statistic percentile with linear interpolation.

    Sort ascending, take rank r = q * (len - 1), and interpolate linearly
    between the floor(r)-th and ceil(r)-th order statistics.
    """
    q = spec.q if isinstance(spec, PercentileSpec) else PercentileSpec(float(spec)).q
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("percentile: empty input")
    r = q * (x.size - 1)
    lo = int(np.floor(r))
    frac = r - lo
    if frac == 0.0:
        return float(x[lo])
    return float(x[lo] * (1.0 - frac) + x[lo + 1] * frac)


def percentile_rows(samples: np.ndarray, q: float) -> np.ndarray:
    """Row-wise percentile of a 2-D array, same rule as :func:`percentile`.

    Uses a partial sort so the per-coordinate quantiles of large posterior
    sample matrices (rows = coordinates, columns = draws) do not require a
    full sort of every row.
    """
    samples = np.asarray(samples)
    n = samples.shape[1]
    if n == 0:
        raise ValueError("percentile_rows: empty input")
    r = q * (n - 1)
    lo = int(np.floor(r))
    frac = r - lo
    if frac == 0.0:
        part = np.partition(samples, lo, axis=1)
        return part[:, lo].astype(float)
    part = np.partition(samples, (lo, lo + 1), axis=1)
    return (part[:, lo] * (1.0 - frac) + part[:, lo + 1] * frac).astype(float)
