import math

import numpy as np
import pytest
from scipy.integrate import quad

from fdci.specfun import (
    PendulumConstants,
    complete_elliptic_k,
    jacobi_sn,
    pendulum_energy,
    pendulum_exact,
    solve_pendulum_constants,
    std_normal_cdf,
)

CANON = PendulumConstants(t0=4.882567374, k=0.5870761413)


class TestNormalCdf:
    def test_at_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_symmetry(self, x):
        assert std_normal_cdf(x) + std_normal_cdf(-x) == pytest.approx(1.0, abs=1e-15)

    def test_against_quadrature_oracle(self):
        density = lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi)
        oracle = 0.5 + quad(density, 0.0, 1.96, epsabs=1e-12)[0]
        assert abs(std_normal_cdf(1.96) - oracle) <= 1e-7

    def test_nondecreasing(self):
        xs = np.linspace(-6.0, 6.0, 201)
        vals = [std_normal_cdf(x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


class TestJacobiSn:
    @pytest.mark.parametrize("u", [0.3, 1.0, 2.5])
    def test_modulus_zero_is_sine(self, u):
        assert abs(jacobi_sn(u, 0.0) - math.sin(u)) <= 1e-10

    @pytest.mark.parametrize("u", [0.3, 1.0])
    def test_modulus_one_is_tanh(self, u):
        assert abs(jacobi_sn(u, 1.0) - math.tanh(u)) <= 1e-8

    @pytest.mark.parametrize("k", [0.1, 0.5870761413, 0.9])
    def test_zero_argument(self, k):
        assert jacobi_sn(0.0, k) == 0.0

    def test_odd_in_u(self):
        for k in (0.2, 0.587, 0.95):
            for u in np.linspace(0.1, 5.0, 17):
                assert abs(jacobi_sn(-u, k) + jacobi_sn(u, k)) <= 1e-12

    def test_periodicity(self):
        for k in (0.3, 0.587, 0.9):
            K = complete_elliptic_k(k)
            for u in (0.4, 1.3, 2.9):
                assert abs(jacobi_sn(u + 4.0 * K, k) - jacobi_sn(u, k)) <= 1e-8

    def test_domain_error(self):
        with pytest.raises(ValueError):
            jacobi_sn(1.0, 1.5)
        with pytest.raises(ValueError):
            jacobi_sn(1.0, -0.1)

    def test_elliptic_k_against_scipy(self):
        from scipy.special import ellipk

        for k in (0.0, 0.3, 0.587, 0.95):
            assert complete_elliptic_k(k) == pytest.approx(float(ellipk(k * k)), abs=1e-12)


class TestPendulumExact:
    def test_bottom_passage(self):
        assert pendulum_exact(CANON.t0, CANON) == 0.0

    def test_boundary_values(self):
        assert abs(pendulum_exact(0.0, CANON) - 1.2) <= 1e-6
        assert abs(pendulum_exact(2.0 * math.pi, CANON) - 1.2) <= 1e-6

    def test_energy_is_conserved(self):
        eps = 1e-6
        for t in (0.5, 2.0, 3.3, 5.5):
            theta = pendulum_exact(t, CANON)
            theta_dot = (pendulum_exact(t + eps, CANON) - pendulum_exact(t - eps, CANON)) / (2 * eps)
            assert pendulum_energy(theta, theta_dot) == pytest.approx(CANON.k**2, abs=1e-8)


class TestSolveConstants:
    def test_canonical_boundary_problem(self):
        c = solve_pendulum_constants(1.2, 1.2, 2.0 * math.pi, PendulumConstants(4.9, 0.6))
        assert abs(c.t0 - 4.882567374) <= 1e-6
        assert abs(c.k - 0.5870761413) <= 1e-6

    def test_fixed_point(self):
        c = solve_pendulum_constants(1.2, 1.2, 2.0 * math.pi, CANON)
        # the guess already solves the system, so it comes back unchanged
        assert c.t0 == CANON.t0 and c.k == CANON.k

    def test_small_amplitude_matches_harmonic(self):
        alpha = 0.01
        c = solve_pendulum_constants(alpha, alpha, 2.0 * math.pi, PendulumConstants(4.9, 0.006))
        assert abs(pendulum_exact(0.0, c) - alpha) <= 1e-10
        # small angles: theta(t) ~ 2k sin(t - t0), amplitude 2k consistent with alpha
        assert 0.004 <= c.k <= 0.007
        for t in np.linspace(0.0, 2.0 * math.pi, 13):
            harmonic = 2.0 * c.k * math.sin(t - c.t0)
            assert abs(pendulum_exact(t, c) - harmonic) <= 1e-6

    def test_nonconvergence_error(self):
        with pytest.raises(RuntimeError, match="convergence"):
            solve_pendulum_constants(1.2, 1.2, 2.0 * math.pi, PendulumConstants(4.9, 0.6), max_iter=1)

    def test_constants_validation(self):
        with pytest.raises(ValueError):
            PendulumConstants(1.0, 1.5)
