"""Design-point grids: uniform, piecewise-uniform, and normal-clustered."""

from dataclasses import dataclass, field

import numpy as np

from ..randgen import RngState, draw_standard_normal

__all__ = ["Grid", "uniform_grid", "piecewise_grid", "clustered_grid"]

_JOIN_TOL = 1e-12


@dataclass(eq=False)
class Grid:
    """Ordered 1-D design points spanning [lo, hi], plus the boundary values
    of the solution at the two endpoints.  May be non-uniform."""

    nodes: np.ndarray
    boundary_lo: float = 0.0
    boundary_hi: float = 0.0

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim != 1 or self.nodes.size < 3:
            raise ValueError("Grid: need at least 3 nodes (one interior point)")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise ValueError("Grid: nodes must be strictly increasing")

    @property
    def lo(self) -> float:
        return float(self.nodes[0])

    @property
    def hi(self) -> float:
        return float(self.nodes[-1])

    @property
    def m(self) -> int:
        """Interior point count."""
        return self.nodes.size - 2

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)

    def is_uniform(self, rtol: float = 1e-12) -> bool:
        h = self.spacings
        return bool(np.max(h) - np.min(h) <= rtol * np.max(h))


def uniform_grid(lo: float, hi: float, m: int, boundary_lo: float = 0.0,
                 boundary_hi: float = 0.0) -> Grid:
    """m interior points equally spaced on [lo, hi]: mesh width (hi-lo)/(m+1)."""
    if m < 1:
        raise ValueError(f"uniform_grid: m must be >= 1, got {m}")
    if lo >= hi:
        raise ValueError(f"uniform_grid: need lo < hi, got [{lo}, {hi}]")
    return Grid(np.linspace(lo, hi, m + 2), boundary_lo, boundary_hi)


def piecewise_grid(segments, boundary_lo: float = 0.0, boundary_hi: float = 0.0) -> Grid:
    """Concatenate uniform segments given as (lo, hi, h) triples.

    Segments must be contiguous; each is split into round((hi-lo)/h)
    subintervals (at least one), so the realized spacing is the closest
    achievable to the requested h.  Join nodes are deduplicated.
    """
    if not segments:
        raise ValueError("piecewise_grid: no segments")
    pieces = []
    prev_hi = None
    for lo, hi, h in segments:
        if lo >= hi:
            raise ValueError(f"piecewise_grid: need lo < hi in segment ({lo}, {hi}, {h})")
        if h <= 0.0:
            raise ValueError(f"piecewise_grid: mesh width must be > 0, got {h}")
        if prev_hi is not None and abs(lo - prev_hi) > _JOIN_TOL * max(abs(lo), 1.0):
            raise ValueError(
                f"piecewise_grid: segments not contiguous (gap/overlap at {prev_hi} -> {lo})"
            )
        n_sub = max(1, round((hi - lo) / h))
        pieces.append(np.linspace(lo, hi, n_sub + 1))
        prev_hi = hi
    nodes = [pieces[0]]
    for p in pieces[1:]:
        nodes.append(p[1:])  # drop the duplicated join node
    return Grid(np.concatenate(nodes), boundary_lo, boundary_hi)


def clustered_grid(base: Grid, extra: int, rng: RngState) -> Grid:
    """Add `extra` standard-normal draws, rescaled to span [lo, hi], to a grid.

    The drawn set is affinely mapped so its minimum lands on lo and its
    maximum on hi (degenerate single-point sets go to the midpoint), merged
    with the base nodes, sorted, and deduplicated at 1e-12 spacing.  The
    result keeps most new points clustered near the center of the domain.
    """
    if extra < 1:
        raise ValueError(f"clustered_grid: extra must be >= 1, got {extra}")
    z = draw_standard_normal(rng, extra)
    zmin, zmax = float(np.min(z)), float(np.max(z))
    if zmax - zmin < 1e-300:
        scaled = np.array([0.5 * (base.lo + base.hi)])
    else:
        scaled = base.lo + (z - zmin) * (base.hi - base.lo) / (zmax - zmin)
    merged = np.sort(np.concatenate([base.nodes, scaled]))
    keep = np.empty(merged.size, dtype=bool)
    keep[0] = True
    last = merged[0]
    for i in range(1, merged.size):
        if merged[i] - last > _JOIN_TOL:
            keep[i] = True
            last = merged[i]
        else:
            keep[i] = False
    nodes = merged[keep]
    nodes[0] = base.lo
    nodes[-1] = base.hi
    return Grid(nodes, base.boundary_lo, base.boundary_hi)
