import numpy as np
import pytest

from conftest import random_dominant_tridiagonal
from fdci import models
from fdci.linalg import BandedMatrix, band_matvec
from fdci.nonlinear import NewtonConfig, NewtonError, NewtonReport, newton_solve


def linear_system(np_rng, n=8):
    A = random_dominant_tridiagonal(np_rng, n)
    b = np_rng.standard_normal(n)
    return A, b


class TestNewtonSolve:
    def test_linear_system_one_iteration(self, np_rng):
        A, b = linear_system(np_rng)
        rep = newton_solve(lambda x: band_matvec(A, x) - b, lambda x: A, np.zeros(8),
                           NewtonConfig(tol=1e-10, max_iter=5))
        assert rep.converged and rep.iterations == 1
        assert np.max(np.abs(band_matvec(A, rep.solution) - b)) <= 1e-10

    def test_already_converged_start(self, np_rng):
        A, b = linear_system(np_rng)
        x_star = np.linalg.solve(A.to_dense(), b)
        rep = newton_solve(lambda x: band_matvec(A, x) - b, lambda x: A, x_star,
                           NewtonConfig(tol=1e-8, max_iter=5))
        assert rep.converged and rep.iterations == 0 and rep.residual_norms == []

    def test_report_invariants(self, np_rng):
        A, b = linear_system(np_rng)
        rep = newton_solve(lambda x: band_matvec(A, x) - b, lambda x: A, np.zeros(8),
                           NewtonConfig(tol=1e-12, max_iter=4))
        assert rep.iterations == len(rep.residual_norms)
        assert rep.converged and rep.residual_norms[-1] <= 1e-12

    def test_singular_jacobian_names_iteration(self):
        J = BandedMatrix.tridiagonal(np.array([0.0]), np.array([0.0, 1.0]), np.array([0.0]))
        with pytest.raises(NewtonError, match="iteration 1"):
            newton_solve(lambda x: x + 1.0, lambda x: J, np.zeros(2), NewtonConfig(max_iter=3))

    def test_nonconvergence_error_policy_carries_report(self):
        # x <- x - (x^2+1)/(2x) never hits zero (no real root)
        G = lambda x: np.array([x[0] ** 2 + 1.0])
        J = lambda x: BandedMatrix.tridiagonal(np.zeros(0), np.array([2.0 * x[0]]), np.zeros(0))
        with pytest.raises(NewtonError) as err:
            newton_solve(G, J, np.array([1.0]), NewtonConfig(tol=1e-12, max_iter=8, on_nonconverge="error"))
        assert isinstance(err.value.report, NewtonReport)
        assert err.value.report.iterations == 8

    def test_return_last_iterate_policy(self):
        G = lambda x: np.array([x[0] ** 2 + 1.0])
        J = lambda x: BandedMatrix.tridiagonal(np.zeros(0), np.array([2.0 * x[0]]), np.zeros(0))
        rep = newton_solve(G, J, np.array([1.0]),
                           NewtonConfig(tol=1e-12, max_iter=8, on_nonconverge="return-last-iterate"))
        assert not rep.converged and rep.iterations == 8
        assert rep.solution.shape == (1,)

    def test_deterministic(self):
        mdl = models.PendulumModel.canonical(40)
        r1 = models.pendulum_solve(mdl)
        r2 = models.pendulum_solve(mdl)
        assert np.array_equal(r1.solution, r2.solution)
        assert r1.residual_norms == r2.residual_norms

    def test_config_validation(self):
        with pytest.raises(ValueError):
            NewtonConfig(tol=0.0)
        with pytest.raises(ValueError):
            NewtonConfig(max_iter=0)
        with pytest.raises(ValueError):
            NewtonConfig(on_nonconverge="shrug")

    def test_quadratic_convergence_witness(self):
        # residuals of the pendulum run shrink at least quadratically near the
        # end; steps that land on the double-precision floor of the residual
        # evaluation (~1e-13 at this mesh) cannot contract further and are
        # exempt from the ratio check
        rep = models.pendulum_solve(models.PendulumModel.canonical(124))
        assert rep.converged
        r = [rep.initial_residual] + rep.residual_norms
        pairs = list(zip(r[:-1], r[1:]))[-3:]
        assert pairs
        for prev, nxt in pairs:
            assert nxt <= 1e6 * prev * prev or nxt <= 1e-12
