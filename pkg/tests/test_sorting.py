import numpy as np
import pytest

from rdopt.optimizers import crowding_distance, fast_non_dominated_sort

from _oracles import peeling_sort_bf


class TestFastNonDominatedSort:
    def test_spec_example(self):
        fronts = fast_non_dominated_sort([(1, 2), (2, 1), (3, 3)])
        assert fronts == [[0, 1], [2]]

    def test_all_identical_costs_single_front(self):
        fronts = fast_non_dominated_sort([(1.0, 1.0)] * 7)
        assert fronts == [list(range(7))]

    def test_empty_population(self):
        assert fast_non_dominated_sort([]) == []

    def test_every_member_in_exactly_one_front(self):
        rng = np.random.default_rng(5)
        costs = rng.random((80, 3))
        fronts = fast_non_dominated_sort(costs)
        flat = sorted(i for f in fronts for i in f)
        assert flat == list(range(80))

    @pytest.mark.parametrize("m", [2, 3])
    def test_matches_brute_force_peeling(self, m):
        rng = np.random.default_rng(m)
        for trial in range(50):
            n = int(rng.integers(1, 201))
            costs = rng.integers(0, 8, (n, m)).astype(float)
            got = [sorted(f) for f in fast_non_dominated_sort(costs)]
            want = [sorted(f) for f in peeling_sort_bf(costs)]
            assert got == want


class TestCrowdingDistance:
    def test_two_point_front_all_infinite(self):
        assert np.all(np.isinf(crowding_distance([(0.0, 1.0), (1.0, 0.0)])))

    def test_three_equally_spaced_collinear_points(self):
        d = crowding_distance([(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)])
        assert np.isinf(d[0]) and np.isinf(d[2])
        assert d[1] == pytest.approx(2.0)

    def test_degenerate_objective_contributes_zero(self):
        base = crowding_distance([(0.0, 5.0), (1.0, 5.0), (2.0, 5.0), (4.0, 5.0)])
        only = crowding_distance([(0.0,), (1.0,), (2.0,), (4.0,)])
        assert np.array_equal(
            np.isinf(base), np.isinf(only))
        finite = ~np.isinf(base)
        assert np.allclose(base[finite], only[finite])

    def test_boundary_rule_on_random_front(self):
        rng = np.random.default_rng(9)
        costs = rng.random((12, 2))
        d = crowding_distance(costs)
        for j in range(2):
            assert np.isinf(d[np.argmin(costs[:, j])])
            assert np.isinf(d[np.argmax(costs[:, j])])
