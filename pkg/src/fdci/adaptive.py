"""Band-width-driven grid refinement.

The band width is an error indicator: where the interval is wide relative
to the rest of the domain, the truncation error is large and the mesh is
too coarse.  The loop here automates the manual workflow of solving,
inspecting the band, and adding points to the offending subintervals.
Refinement is deterministic (midpoint insertion); the normal-cluster
strategy for reproducing the hand-tuned figures lives in
``models.clustered_grid``.
"""

from dataclasses import dataclass, field

import numpy as np

from .bayes import PosteriorBand, PosteriorConfig, credible_band
from .models.grid import Grid
from .randgen import RngState

__all__ = ["RefinePolicy", "RefineRound", "RefineHistory", "flag_intervals", "refine", "adapt_loop"]


@dataclass(frozen=True)
class RefinePolicy:
    """When to flag an interval, how many points to add, when to stop."""

    flag_ratio: float = 2.0              # flag if endpoint width > ratio * median width
    points_per_flagged_interval: int = 1
    max_rounds: int = 5
    stop_ratio: float = 1.5              # stop once max width / median width <= this

    def __post_init__(self):
        if self.flag_ratio <= 1.0:
            raise ValueError(f"RefinePolicy: flag_ratio must be > 1, got {self.flag_ratio}")
        if self.points_per_flagged_interval < 1:
            raise ValueError("RefinePolicy: points_per_flagged_interval must be >= 1")
        if self.max_rounds < 1:
            raise ValueError(f"RefinePolicy: max_rounds must be >= 1, got {self.max_rounds}")


@dataclass
class RefineRound:
    grid_size: int          # interior point count for this round's solve
    max_width: float
    median_width: float
    sup_error: float | None  # vs the model's reference solution, when it has one
    flagged: int             # intervals flagged at the end of the round


@dataclass
class RefineHistory:
    rounds: list = field(default_factory=list)
    final_grid: Grid | None = None
    final_solution: np.ndarray | None = None
    final_band: PosteriorBand | None = None


def flag_intervals(grid: Grid, band: PosteriorBand, policy: RefinePolicy) -> list[int]:
    """Indices of grid intervals whose endpoint band width is an outlier.

    Interval i joins node i to node i+1 (i = 0 .. m+1-1); it is flagged
    when the largest band width among its interior endpoints exceeds
    flag_ratio times the median width.  Boundary nodes carry no width.
    """
    width = np.asarray(band.width, dtype=float)
    if width.size != grid.m:
        raise ValueError(
            f"flag_intervals: band has {width.size} widths, grid has {grid.m} interior nodes"
        )
    cut = policy.flag_ratio * float(np.median(width))
    flags = []
    for i in range(grid.m + 1):
        w_left = width[i - 1] if i >= 1 else -np.inf
        w_right = width[i] if i < grid.m else -np.inf
        if max(w_left, w_right) > cut:
            flags.append(i)
    return flags


def refine(grid: Grid, flags, policy: RefinePolicy) -> Grid:
    """Insert equispaced points into each flagged interval; keeps all old nodes."""
    flags = sorted(set(flags))
    if not flags:
        return grid
    k = policy.points_per_flagged_interval
    if flags[0] < 0 or flags[-1] > grid.m:
        raise ValueError(f"refine: interval indices must lie in [0, {grid.m}]")
    pieces = []
    for i in flags:
        a, b = grid.nodes[i], grid.nodes[i + 1]
        pieces.append(a + (b - a) * np.arange(1, k + 1) / (k + 1))
    nodes = np.sort(np.concatenate([grid.nodes, *pieces]))
    return Grid(nodes, grid.boundary_lo, grid.boundary_hi)


def adapt_loop(model, policy: RefinePolicy, cfg: PosteriorConfig, rng: RngState) -> RefineHistory:
    """Solve -> band -> flag -> refine until the width profile flattens.

    `model` must provide .grid, .with_grid(grid), .solve() -> solution,
    .regression(solution), and optionally .reference_values(x) for the
    sup-error column of the history.  Stops when max/median width reaches
    policy.stop_ratio, when nothing is flagged, or after max_rounds.
    """
    history = RefineHistory()
    for round_idx in range(1, policy.max_rounds + 1):
        try:
            solution = model.solve()
        except Exception as exc:
            raise RuntimeError(f"adapt_loop: solve failed in round {round_idx}: {exc}") from exc
        band = credible_band(model.regression(solution), cfg, rng)
        sup_error = None
        if hasattr(model, "reference_values"):
            ref = model.reference_values(model.grid.interior)
            sup_error = float(np.max(np.abs(solution - ref)))
        max_w = float(np.max(band.width))
        med_w = float(np.median(band.width))
        flags = [] if max_w <= policy.stop_ratio * med_w else flag_intervals(model.grid, band, policy)
        history.rounds.append(
            RefineRound(
                grid_size=model.grid.m,
                max_width=max_w,
                median_width=med_w,
                sup_error=sup_error,
                flagged=len(flags),
            )
        )
        history.final_grid = model.grid
        history.final_solution = solution
        history.final_band = band
        if not flags:
            break
        model = model.with_grid(refine(model.grid, flags, policy))
    return history
