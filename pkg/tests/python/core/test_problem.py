"""Tests for ProblemSpec, RandomStream and RunRecord"""

import csv

import numpy as np
import pytest

from proxyforge.core.budget import BudgetedEvaluator
from proxyforge.core.errors import DimensionMismatch
from proxyforge.core.problem import ProblemSpec
from proxyforge.core.records import TRACE_CSV_HEADER, RunRecord
from proxyforge.core.rng import RandomStream, seeded_rng


def make_linear(dim: int = 3) -> ProblemSpec:
    return ProblemSpec("linear", dim, np.zeros(dim), np.ones(dim), lambda X: np.sum(X, axis=1), known_optimum=0.0)


class TestProblemSpec:
    """Test suite for the problem abstraction"""

    def test_bounds_are_arrays(self):
        """Test that bounds are stored as float arrays of length D"""
        problem = ProblemSpec("p", 2, [0, 0], [1, 2], lambda X: X[:, 0])
        assert problem.lower_bounds.dtype == float
        assert list(problem.upper_bounds) == [1.0, 2.0]

    def test_bounds_length_must_match_dim(self):
        """Test that bounds of the wrong length are rejected"""
        with pytest.raises(DimensionMismatch):
            ProblemSpec("p", 3, np.zeros(2), np.ones(2), lambda X: X[:, 0])

    def test_lower_must_be_below_upper(self):
        """Test that an empty box is rejected"""
        with pytest.raises(ValueError):
            ProblemSpec("p", 1, np.ones(1), np.ones(1), lambda X: X[:, 0])

    def test_values_checks_dimension(self):
        """Test batch evaluation and its dimension check"""
        problem = make_linear()
        assert list(problem.values(np.ones((2, 3)))) == [3.0, 3.0]
        with pytest.raises(DimensionMismatch):
            problem.values(np.ones((2, 4)))

    def test_describe(self):
        """Test the metadata dict"""
        info = make_linear().describe()
        assert info["name"] == "linear"
        assert info["dim"] == 3
        assert info["known_optimum"] == 0.0


class TestRandomStream:
    """Test suite for seeded streams"""

    def test_same_path_same_draws(self):
        """Test that identical (seed, keys) reproduce identical draws"""
        a = RandomStream(7).child(1, 2).draw_uniform(size=5)
        b = RandomStream(7).child(1, 2).draw_uniform(size=5)
        assert np.array_equal(a, b)

    def test_children_independent_of_parent_state(self):
        """Test that drawing from a parent does not change its children"""
        parent = RandomStream(3)
        before = parent.child(4).draw_seed()
        parent.draw_uniform(size=100)
        assert parent.child(4).draw_seed() == before

    def test_different_keys_differ(self):
        """Test that sibling streams produce different draws"""
        assert RandomStream(0).child(0).draw_seed() != RandomStream(0).child(1).draw_seed()

    def test_seeded_rng(self):
        """Test the (master seed, stream id) constructor"""
        assert seeded_rng(5, 2).keys == (2,)
        assert seeded_rng(5, 2).draw_seed() == RandomStream(5, (2,)).draw_seed()


class TestRunRecord:
    """Test suite for run records"""

    def make_record(self) -> RunRecord:
        evaluator = BudgetedEvaluator(make_linear(), budget=4)
        for value in (0.5, 0.25, 0.75):
            evaluator(np.full(3, value))
        return RunRecord.from_evaluator(evaluator, "RS", {"family": "RS"}, seed=11)

    def test_from_evaluator(self):
        """Test that the record captures the trace, best point and AOCC"""
        record = self.make_record()
        assert record.problem == "linear"
        assert record.budget == 4
        assert len(record.trace) == 3
        assert record.best_value == pytest.approx(0.75)
        assert record.best_x == [0.25, 0.25, 0.25]
        assert 0.0 <= record.aocc <= 1.0
        assert record.optimum == 0.0

    def test_json_persistence(self, tmp_path):
        """Test that a record written to JSON reads back equal"""
        record = self.make_record()
        path = record.write_json(tmp_path / "run.json")
        assert RunRecord.read_json(path) == record

    def test_trace_csv(self, tmp_path):
        """Test the trace CSV layout"""
        path = self.make_record().write_trace_csv(tmp_path / "run.csv")
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == TRACE_CSV_HEADER
        assert len(rows) == 4
        assert [row[0] for row in rows[1:]] == ["1", "2", "3"]

    def test_unused_evaluator_has_no_aocc(self):
        """Test that a run without evaluations has no AOCC"""
        record = RunRecord.from_evaluator(BudgetedEvaluator(make_linear(), 2), "RS", {}, 0)
        assert record.aocc is None
        assert record.best_value is None
