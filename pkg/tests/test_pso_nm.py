import numpy as np
import pytest

from rdopt.core import Parameter, ProblemSpec, sphere_problem
from rdopt.errors import ConfigError, ContractError
from rdopt.optimizers import (
    NelderMeadConfig,
    PsoConfig,
    nelder_mead_run,
    pso_run,
)


class TestPso:
    def test_sphere_convergence_seed_averaged(self):
        spec = sphere_problem(dim=5)
        bests = []
        for seed in range(5):
            res = pso_run(spec, PsoConfig(swarm_size=30, iterations=200, seed=seed))
            bests.append(res.best.f[0])
        assert np.mean(bests) < 1e-4

    def test_multi_objective_rejected(self):
        spec = ProblemSpec((Parameter("x", 0, 1),), 2,
                           lambda x: np.array([x[0], 1 - x[0]]))
        with pytest.raises(ConfigError):
            pso_run(spec, PsoConfig(seed=0))

    def test_frozen_swarm_with_zero_coefficients(self):
        spec = sphere_problem(dim=3)
        cfg = PsoConfig(swarm_size=4, iterations=10, inertia=0.0,
                        cognitive=0.0, social=0.0, seed=1)
        res = pso_run(spec, cfg)
        # velocities start at zero, so the swarm never moves and the best
        # value stays at the initial best
        assert np.all(res.history == res.history[0])

    def test_global_best_monotone_nonincreasing(self):
        spec = sphere_problem(dim=4)
        res = pso_run(spec, PsoConfig(swarm_size=10, iterations=50, seed=3))
        assert np.all(np.diff(res.history) <= 0.0)

    def test_request_count(self):
        spec = sphere_problem(dim=2)
        res = pso_run(spec, PsoConfig(swarm_size=7, iterations=9, seed=0))
        assert res.n_requests == 7 * 10


class TestNelderMead:
    def test_quadratic_from_origin(self):
        res = nelder_mead_run(lambda x: (x[0] - 3.0) ** 2,
                              NelderMeadConfig(x0=np.array([0.0]), max_iters=300))
        assert abs(res.x[0] - 3.0) < 1e-6
        assert res.converged

    def test_already_converged_start_returns_immediately(self):
        res = nelder_mead_run(lambda x: 1.0,
                              NelderMeadConfig(x0=np.array([0.2, 0.4])))
        assert res.n_iterations == 0
        assert res.converged
        assert res.f == 1.0

    def test_rosenbrock_classic_start(self):
        def rosen(x):
            return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2
        res = nelder_mead_run(rosen, NelderMeadConfig(
            x0=np.array([-1.2, 1.0]), max_iters=500))
        assert res.f < 1e-6
        assert res.n_iterations <= 500

    def test_nan_at_start_rejected(self):
        with pytest.raises(ContractError):
            nelder_mead_run(lambda x: float("nan"),
                            NelderMeadConfig(x0=np.array([0.0])))

    def test_result_never_worse_than_start(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            x0 = rng.uniform(-3, 3, 3)
            fn = lambda x: float(np.sum(np.abs(x)) + np.sin(x[0]))
            res = nelder_mead_run(fn, NelderMeadConfig(x0=x0, max_iters=50))
            assert res.f <= fn(x0) + 1e-15

    def test_bounds_respected(self):
        lo, hi = np.array([0.5, 0.5]), np.array([2.0, 2.0])
        res = nelder_mead_run(lambda x: float(np.sum(x ** 2)),
                              NelderMeadConfig(x0=np.array([1.5, 1.5]),
                                               bounds=(lo, hi), max_iters=200))
        assert np.all(res.x >= lo - 1e-15) and np.all(res.x <= hi + 1e-15)
        assert np.allclose(res.x, lo, atol=1e-6)

    def test_coefficient_validation(self):
        with pytest.raises(ConfigError):
            NelderMeadConfig(x0=np.array([0.0]), expansion=0.9)
        with pytest.raises(ConfigError):
            NelderMeadConfig(x0=np.array([0.0]), contraction=1.5)
