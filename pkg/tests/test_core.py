import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdopt.core import (
    Individual,
    Parameter,
    Population,
    ProblemSpec,
    Provenance,
    ResultsLog,
    denormalize,
    dominates,
    individual_from_record,
    iter_log_records,
    normalize,
    pareto_front,
)
from rdopt.errors import ContractError

from _oracles import pareto_indices_bf


def make_spec(dim=3):
    return ProblemSpec(tuple(Parameter(f"x{i}", -2.0, 3.0) for i in range(dim)),
                       1, "sphere")


class TestTypes:
    def test_parameter_rejects_inverted_bounds(self):
        with pytest.raises(ContractError):
            Parameter("a", 1.0, 1.0)

    def test_duplicate_parameter_names_rejected(self):
        with pytest.raises(ContractError):
            ProblemSpec((Parameter("a", 0, 1), Parameter("a", 0, 1)), 1, "sphere")

    def test_individual_std_provenance_coupling(self):
        with pytest.raises(ContractError):
            Individual(x=[0.5], f=[1.0], provenance=Provenance.PREDICTED)
        with pytest.raises(ContractError):
            Individual(x=[0.5], f=[1.0], predicted_std=[0.1])
        ind = Individual(x=[0.5], f=[1.0], provenance=Provenance.PREDICTED,
                         predicted_std=[0.1])
        assert ind.predicted_std[0] == 0.1

    def test_individual_arrays_readonly(self):
        ind = Individual(x=[0.5, 1.0], f=[1.0])
        with pytest.raises(ValueError):
            ind.x[0] = 2.0

    def test_population_rejects_mixed_lengths(self):
        a = Individual(x=[0.1, 0.2], f=[1.0])
        b = Individual(x=[0.1], f=[1.0])
        with pytest.raises(ContractError):
            Population(0, (a, b))


class TestDominance:
    def test_spec_examples(self):
        assert dominates((1, 2), (2, 3))
        assert not dominates((1, 2), (2, 1))
        assert not dominates((1, 2), (1, 2))

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            dominates((1, 2), (1, 2, 3))

    def test_nan_is_infeasible(self):
        assert not dominates((np.nan, 1.0), (5.0, 5.0))
        assert dominates((5.0, 5.0), (np.nan, 1.0))
        assert not dominates((np.nan, 1.0), (np.nan, 2.0))

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)),
                    min_size=3, max_size=3))
    def test_irreflexive_antisymmetric_transitive(self, triple):
        a, b, c = [np.array(v, dtype=float) for v in triple]
        assert not dominates(a, a)
        if dominates(a, b):
            assert not dominates(b, a)
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)


class TestParetoFront:
    def test_spec_examples(self):
        members = [Individual(x=[0.0], f=f) for f in ((1, 2), (2, 1), (3, 3))]
        front = pareto_front(members)
        assert [tuple(m.f) for m in front] == [(1.0, 2.0), (2.0, 1.0)]
        assert pareto_front([members[0]]) == [members[0]]
        assert pareto_front([]) == []

    def test_matches_brute_force_on_random_sets(self):
        rng = np.random.default_rng(42)
        costs = rng.random((200, 2))
        members = [Individual(x=[0.0], f=c) for c in costs]
        got = [tuple(m.f) for m in pareto_front(members)]
        want = [tuple(costs[i]) for i in pareto_indices_bf(costs)]
        assert got == want

    def test_front_mutually_nondominating_and_covers_excluded(self):
        rng = np.random.default_rng(3)
        costs = rng.integers(0, 6, (60, 3)).astype(float)
        members = [Individual(x=[0.0], f=c) for c in costs]
        front = pareto_front(members)
        fset = {id(m) for m in front}
        for a in front:
            for b in front:
                assert not dominates(a.f, b.f)
        for m in members:
            if id(m) not in fset:
                assert any(dominates(a.f, m.f) for a in front)


class TestNormalization:
    def test_bounds_map_to_cube_corners(self):
        spec = make_spec()
        assert np.allclose(normalize(spec.lower, spec), 0.0)
        assert np.allclose(normalize(spec.upper, spec), 1.0)
        assert np.allclose(denormalize(np.zeros(3), spec), spec.lower)
        assert np.allclose(denormalize(np.ones(3), spec), spec.upper)

    def test_roundtrip_many_points(self):
        spec = make_spec(6)
        rng = np.random.default_rng(0)
        for _ in range(200):
            x = spec.lower + rng.random(6) * (spec.upper - spec.lower)
            back = denormalize(normalize(x, spec), spec)
            assert np.max(np.abs(back - x) / np.maximum(np.abs(x), 1.0)) < 1e-12

    def test_out_of_bounds_rejected(self):
        spec = make_spec()
        with pytest.raises(ContractError):
            normalize([0.0, 0.0, 3.5], spec)
        with pytest.raises(ContractError):
            denormalize([0.5, 0.5, 1.5], spec)


class TestResultsLog:
    def test_roundtrip_single_record(self, tmp_path):
        path = tmp_path / "log.jsonl"
        ind = Individual(x=[0.25, 0.5], f=[1.5, -2.0],
                         provenance=Provenance.PREDICTED,
                         predicted_std=[0.01, 0.02], generation=3)
        with ResultsLog(path, "run-a") as log:
            log.append(ind, wall_time_s=1.25)
        rec = next(iter_log_records(path))
        back = individual_from_record(rec)
        assert np.array_equal(back.x, ind.x)
        assert np.array_equal(back.f, ind.f)
        assert np.array_equal(back.predicted_std, ind.predicted_std)
        assert back.provenance == ind.provenance
        assert back.generation == 3
        assert rec["run_id"] == "run-a"
        assert rec["wall_time_s"] == 1.25

    def test_generation_ordered_records(self, tmp_path):
        path = tmp_path / "log.jsonl"
        with ResultsLog(path, "r") as log:
            for gen in range(3):
                for k in range(20):
                    log.append(Individual(x=[k / 20], f=[float(k)], generation=gen))
        recs = [r for r in iter_log_records(path) if r["record"] == "individual"]
        assert len(recs) == 60
        assert [r["generation"] for r in recs] == sorted(r["generation"] for r in recs)

    def test_truncated_tail_is_skipped(self, tmp_path):
        path = tmp_path / "log.jsonl"
        with ResultsLog(path, "r") as log:
            for k in range(5):
                log.append(Individual(x=[0.1], f=[float(k)]))
        raw = path.read_bytes()
        cut = path.with_name("cut.jsonl")
        cut.write_bytes(raw[:-17])  # chop into the final record
        recs = list(iter_log_records(cut))
        assert len(recs) == 4
        assert [r["f"][0] for r in recs] == [0.0, 1.0, 2.0, 3.0]
        with pytest.raises(ValueError):
            list(iter_log_records(cut, strict=True))

    def test_summary_record(self, tmp_path):
        path = tmp_path / "log.jsonl"
        with ResultsLog(path, "r") as log:
            log.append_summary(12.5, 100, 30)
        rec = next(iter_log_records(path))
        assert rec == {"record": "summary", "run_id": "r", "elapsed_s": 12.5,
                       "n_predicted": 100, "n_evaluated": 30}
