import numpy as np
import pytest

from rdopt.core import Parameter, ProblemSpec, Provenance
from rdopt.errors import ConfigError, ContractError
from rdopt.surrogate import (
    GPHyper,
    SurrogateConfig,
    SurrogateManager,
    gp_fit,
    gp_predict,
)

from _oracles import gp_dense_predict


class TestGpFit:
    def test_two_point_noiseless_interpolation(self):
        X = np.array([[0.2], [0.8]])
        y = np.array([1.0, -0.5])
        m = gp_fit(X, y, GPHyper(noise_std=1e-9))
        for xi, yi in zip(X, y):
            mean, _ = gp_predict(m, xi)
            assert abs(mean - yi) < 1e-8

    def test_training_targets_reproduced_within_noise(self):
        rng = np.random.default_rng(1)
        X = rng.random((25, 3))
        y = np.sin(3 * X[:, 0]) + X[:, 1] ** 2
        m = gp_fit(X, y)
        for xi, yi in zip(X, y):
            mean, _ = gp_predict(m, xi)
            assert abs(mean - yi) <= 3 * m.noise_std + 1e-8

    def test_prior_reversion_far_from_data(self):
        X = np.array([[0.0, 0.0], [0.05, 0.0]])
        y = np.array([3.0, 3.5])
        m = gp_fit(X, y, GPHyper(length_scale=0.05, signal_std=2.0, noise_std=1e-8))
        _, std = gp_predict(m, [1.0, 1.0])  # 20 length scales away
        assert std == pytest.approx(2.0, rel=0.01)

    def test_sin_midpoint_accuracy(self):
        xs = np.linspace(0.0, 1.0, 20)
        y = np.sin(2 * np.pi * xs)
        m = gp_fit(xs[:, None], y)
        mids = 0.5 * (xs[:-1] + xs[1:])
        errs = [abs(gp_predict(m, [t])[0] - np.sin(2 * np.pi * t)) for t in mids]
        assert max(errs) < 1e-2

    def test_symmetric_data_predicts_average(self):
        X = np.array([[0.3], [0.7]])
        y = np.array([2.0, 5.0])
        m = gp_fit(X, y, GPHyper(signal_std=1.0, noise_std=1e-6))
        mean, _ = gp_predict(m, [0.5])
        assert mean == pytest.approx(3.5, abs=1e-9)

    def test_input_validation(self):
        with pytest.raises(ContractError):
            gp_fit(np.array([[0.5]]), np.array([1.0]))  # single point
        with pytest.raises(ContractError):
            gp_fit(np.array([[0.2], [3.0]]), np.array([1.0, 2.0]))  # off-cube
        with pytest.raises(ContractError):
            gp_fit(np.array([[0.2], [0.4]]), np.array([1.0, np.inf]))


class TestGpPredictOracle:
    def test_matches_dense_solve_on_random_models(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n, d = int(rng.integers(5, 30)), int(rng.integers(1, 4))
            X = rng.random((n, d))
            y = rng.standard_normal(n)
            ell = float(rng.uniform(0.1, 0.6))
            sf = float(rng.uniform(0.5, 2.0))
            sn = float(rng.uniform(1e-6, 1e-3))
            m = gp_fit(X, y, GPHyper(length_scale=ell, signal_std=sf, noise_std=sn))
            xq = rng.random(d)
            mean, std = gp_predict(m, xq)
            mean_o, std_o = gp_dense_predict(X, y, xq, np.full(d, ell), sf, sn)
            assert mean == pytest.approx(mean_o, abs=1e-8)
            assert std == pytest.approx(std_o, abs=1e-8)

    def test_variance_shrinks_with_nested_training_sets(self):
        rng = np.random.default_rng(3)
        X = rng.random((40, 2))
        y = np.sin(4 * X[:, 0]) * X[:, 1]
        hyper = GPHyper(length_scale=0.3, signal_std=1.0, noise_std=1e-4)
        xq = np.array([0.4, 0.6])
        prev = np.inf
        for n in (5, 10, 20, 40):
            m = gp_fit(X[:n], y[:n], hyper)
            _, std = gp_predict(m, xq)
            assert std <= prev + 1e-9
            prev = std


def two_obj_spec(calls=None):
    def ev(x):
        if calls is not None:
            calls.append(np.array(x))
        return np.array([float(np.sum(x ** 2)), float(np.sum((x - 1.0) ** 2))])
    return ProblemSpec(tuple(Parameter(f"x{i}", 0.0, 1.0) for i in range(2)),
                       2, ev, name="quad2")


class TestSurrogateManager:
    def test_first_n_requests_all_evaluated(self):
        mgr = SurrogateManager(two_obj_spec(), config=SurrogateConfig(train_step=30))
        rng = np.random.default_rng(0)
        for k in range(30):
            _, prov, std = mgr.evaluate(rng.random(2))
            assert prov is Provenance.EVALUATED and std is None
        assert mgr.counters.n_evaluated == 30
        assert mgr.fit_trace == [30]

    def test_counter_identity_and_gating(self):
        mgr = SurrogateManager(two_obj_spec(), config=SurrogateConfig(train_step=10))
        rng = np.random.default_rng(1)
        total = 400
        for _ in range(total):
            mgr.evaluate(rng.random(2))
        assert mgr.counters.n_evaluated + mgr.counters.n_predicted == total
        assert mgr.counters.n_predicted > 0

    def test_predictions_carry_std_and_skip_training(self):
        mgr = SurrogateManager(two_obj_spec(), config=SurrogateConfig(train_step=5))
        rng = np.random.default_rng(2)
        xs = rng.random((5, 2))
        for x in xs:
            mgr.evaluate(x)
        n_train_before = len(mgr._U)
        # a revisited training point predicts with near-zero std
        f, prov, std = mgr.evaluate(xs[0])
        assert prov is Provenance.PREDICTED
        assert std is not None and np.all(std >= 0)
        assert len(mgr._U) == n_train_before
        truth = two_obj_spec().evaluate(xs[0])
        assert np.allclose(f, truth, atol=1e-4)

    def test_retraining_at_exact_multiples(self):
        cfg = SurrogateConfig(train_step=7, sigma_gate=0.5)
        mgr = SurrogateManager(two_obj_spec(), config=cfg)
        rng = np.random.default_rng(5)
        while mgr.counters.n_evaluated < 35:
            mgr.evaluate(rng.random(2))
        assert mgr.fit_trace == [7, 14, 21, 28, 35]
        assert all(t % 7 == 0 for t in mgr.fit_trace)

    def test_disabled_manager_is_pure_passthrough(self):
        calls = []
        spec = two_obj_spec(calls)
        mgr = SurrogateManager(spec, config=SurrogateConfig(enabled=False))
        rng = np.random.default_rng(3)
        xs = rng.random((50, 2))
        outs = [mgr.evaluate(x) for x in xs]
        assert mgr.counters.n_evaluated == 50 and mgr.counters.n_predicted == 0
        assert len(mgr._U) == 0 and mgr._models is None
        direct = [spec.evaluate(x) for x in xs]
        for (f, prov, std), fd in zip(outs, direct):
            assert np.array_equal(f, fd)
            assert prov is Provenance.EVALUATED and std is None

    def test_nonfinite_costs_never_enter_training(self):
        def ev(x):
            if x[0] > 0.5:
                return np.array([np.inf, 1.0])
            return np.array([float(x[0]), float(x[1])])
        spec = ProblemSpec((Parameter("a", 0, 1), Parameter("b", 0, 1)), 2, ev)
        mgr = SurrogateManager(spec, config=SurrogateConfig(train_step=4))
        rng = np.random.default_rng(8)
        for _ in range(40):
            mgr.evaluate(rng.random(2))
        assert all(np.all(np.isfinite(y)) for y in mgr._Y)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            SurrogateConfig(train_step=0)
        with pytest.raises(ConfigError):
            SurrogateConfig(sigma_gate=1.5)
