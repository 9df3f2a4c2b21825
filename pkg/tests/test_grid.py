import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdci.models.grid import Grid, clustered_grid, piecewise_grid, uniform_grid
from fdci.randgen import RngState


class TestGridInvariants:
    def test_requires_interior_point(self):
        with pytest.raises(ValueError):
            Grid(np.array([0.0, 1.0]))

    def test_strictly_increasing(self):
        with pytest.raises(ValueError):
            Grid(np.array([0.0, 0.5, 0.5, 1.0]))

    def test_accessors(self):
        g = uniform_grid(0.0, 1.0, 3, boundary_lo=-1.0, boundary_hi=2.0)
        assert g.lo == 0.0 and g.hi == 1.0 and g.m == 3
        assert g.boundary_lo == -1.0 and g.boundary_hi == 2.0
        assert np.allclose(g.interior, [0.25, 0.5, 0.75])


class TestUniformGrid:
    def test_canonical_linear_bvp_layout(self):
        g = uniform_grid(0.0, math.pi, 99)
        assert g.nodes.size == 101
        assert g.spacings[0] == pytest.approx(math.pi / 100.0, abs=1e-15)

    def test_single_interior_point(self):
        g = uniform_grid(0.0, 1.0, 1)
        assert np.array_equal(g.nodes, [0.0, 0.5, 1.0])

    def test_pendulum_mesh_width(self):
        g = uniform_grid(0.0, 2.0 * math.pi, 124)
        assert g.spacings[0] == pytest.approx(2.0 * math.pi / 125.0, rel=1e-14)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            uniform_grid(1.0, 0.0, 5)
        with pytest.raises(ValueError):
            uniform_grid(0.0, 1.0, 0)


class TestPiecewiseGrid:
    def test_quarter_layout_interior_count(self):
        # the two target spacings cannot tile quarter-domains at exactly
        # m = 124; nearest-count rounding must land within +-2
        half = math.pi / 2.0
        segs = [(0.0, half, 5.3 / 80), (half, 2 * half, 3.3 / 80),
                (2 * half, 3 * half, 5.3 / 80), (3 * half, 4 * half, 3.3 / 80)]
        g = piecewise_grid(segs)
        assert abs(g.m - 124) <= 2

    def test_single_segment_equals_uniform(self):
        g1 = piecewise_grid([(0.0, 1.0, 0.25)])
        g2 = uniform_grid(0.0, 1.0, 3)
        assert np.allclose(g1.nodes, g2.nodes)

    def test_two_equal_segments_equal_uniform(self):
        g1 = piecewise_grid([(0.0, 0.5, 0.25), (0.5, 1.0, 0.25)])
        g2 = uniform_grid(0.0, 1.0, 3)
        assert np.allclose(g1.nodes, g2.nodes)
        assert g1.nodes.size == g2.nodes.size  # join deduplicated

    def test_gap_rejected(self):
        with pytest.raises(ValueError, match="contiguous"):
            piecewise_grid([(0.0, 0.4, 0.1), (0.5, 1.0, 0.1)])

    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="contiguous"):
            piecewise_grid([(0.0, 0.6, 0.1), (0.5, 1.0, 0.1)])


class TestClusteredGrid:
    def base(self):
        return uniform_grid(0.0, 1.0, 200, boundary_lo=-1.0, boundary_hi=1.5)

    def test_added_count(self):
        # the rescaled extremes land exactly on the boundary nodes and are
        # deduplicated, so `extra` draws add extra - 2 new interior nodes
        base = self.base()
        g = clustered_grid(base, 200, RngState(1))
        assert g.m == base.m + 198

    def test_five_thousand_points(self):
        g = clustered_grid(self.base(), 5000, RngState(3))
        assert g.m >= self.base().m + 4900  # a few random near-collisions may dedupe

    def test_concentrated_near_center(self):
        base = self.base()
        g = clustered_grid(base, 400, RngState(2))
        new = np.setdiff1d(g.nodes, base.nodes)
        central = np.sum((new > 1.0 / 3.0) & (new < 2.0 / 3.0))
        assert central > 0.5 * new.size  # normal mass concentrates mid-domain

    def test_deterministic_single_insertion(self):
        g1 = clustered_grid(self.base(), 1, RngState(9))
        g2 = clustered_grid(self.base(), 1, RngState(9))
        assert np.array_equal(g1.nodes, g2.nodes)
        assert g1.m == self.base().m + 1

    def test_preserves_boundaries_and_values(self):
        base = self.base()
        g = clustered_grid(base, 37, RngState(5))
        assert g.lo == base.lo and g.hi == base.hi
        assert g.boundary_lo == base.boundary_lo and g.boundary_hi == base.boundary_hi

    def test_rejects_nonpositive_extra(self):
        with pytest.raises(ValueError):
            clustered_grid(self.base(), 0, RngState(0))

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31), extra=st.integers(2, 300))
    def test_nodes_remain_strictly_increasing(self, seed, extra):
        g = clustered_grid(self.base(), extra, RngState(seed))
        assert np.all(np.diff(g.nodes) > 0)
        assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0
