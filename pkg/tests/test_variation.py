import numpy as np
import pytest

from rdopt.optimizers import polynomial_mutation, sbx_crossover
from rdopt.optimizers.nsga2 import _sbx_beta, slot_rng

from _oracles import sbx_beta_cdf


class TestSbx:
    def test_u_half_gives_identity(self):
        p1 = np.array([0.2, 0.7])
        p2 = np.array([0.4, 0.1])
        beta = _sbx_beta(np.array([0.5, 0.5]), 15.0)
        assert np.allclose(beta, 1.0)
        c1 = 0.5 * ((1 + beta) * p1 + (1 - beta) * p2)
        assert np.allclose(c1, p1)

    def test_mean_preservation_preclip(self):
        rng = slot_rng(0, 0, 0)
        for _ in range(100):
            p1, p2 = rng.random(8), rng.random(8)
            u = rng.random(8)
            beta = _sbx_beta(u, 15.0)
            c1 = 0.5 * ((1 + beta) * p1 + (1 - beta) * p2)
            c2 = 0.5 * ((1 - beta) * p1 + (1 + beta) * p2)
            assert np.max(np.abs((c1 + c2) / 2 - (p1 + p2) / 2)) < 1e-12

    def test_children_stay_in_unit_cube(self):
        rng = slot_rng(1, 0, 0)
        for _ in range(200):
            c1, c2 = sbx_crossover(rng.random(5), rng.random(5), 2.0, rng)
            for c in (c1, c2):
                assert np.all(c >= 0.0) and np.all(c <= 1.0)

    def test_spread_distribution_matches_inverse_cdf(self):
        # empirical CDF of drawn spread factors vs the closed form
        rng = slot_rng(7, 0, 0)
        eta = 15.0
        beta = _sbx_beta(rng.random(100_000), eta)
        for b in (0.5, 0.8, 1.0, 1.2, 1.5):
            emp = float(np.mean(beta <= b))
            assert emp == pytest.approx(sbx_beta_cdf(b, eta), abs=0.01)

    def test_far_child_fraction_matches_analytic(self):
        # parents 0 and 1: |c1 - p1| = |1 - beta| / 2 > 0.25 iff beta < 0.5
        # or beta > 1.5; compare the empirical (pre-clip) fraction
        rng = slot_rng(11, 0, 0)
        eta = 15.0
        beta = _sbx_beta(rng.random(100_000), eta)
        frac = float(np.mean(np.abs(1.0 - beta) / 2.0 > 0.25))
        want = sbx_beta_cdf(0.5, eta) + (1.0 - sbx_beta_cdf(1.5, eta))
        assert frac == pytest.approx(want, abs=0.01)


class TestPolynomialMutation:
    def test_zero_probability_is_identity(self):
        rng = slot_rng(0, 1, 0)
        x = rng.random(6)
        assert np.array_equal(polynomial_mutation(x, 20.0, 0.0, rng), x)

    def test_boundary_zero_moves_up_only(self):
        x = np.zeros(4)
        for k in range(200):
            out = polynomial_mutation(x, 20.0, 1.0, slot_rng(2, k, 0))
            assert np.all(out >= 0.0)

    def test_closure_in_unit_cube(self):
        rng = slot_rng(3, 0, 0)
        for _ in range(200):
            out = polynomial_mutation(rng.random(5), 5.0, 1.0, rng)
            assert np.all(out >= 0.0) and np.all(out <= 1.0)

    def test_mean_displacement_shrinks_with_eta(self):
        x = np.full(100_000, 0.5)
        d20 = np.mean(np.abs(
            polynomial_mutation(x, 20.0, 1.0, slot_rng(4, 0, 0)) - x))
        d200 = np.mean(np.abs(
            polynomial_mutation(x, 200.0, 1.0, slot_rng(4, 0, 0)) - x))
        assert d200 < d20
