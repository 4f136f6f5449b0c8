"""Tests for BudgetedEvaluator and BudgetLedger"""

import numpy as np
import pytest

from proxyforge.core.budget import BudgetedEvaluator, BudgetLedger, EvalKind, Phase
from proxyforge.core.errors import BudgetExhausted, DimensionMismatch
from proxyforge.core.problem import ProblemSpec


def make_sphere(dim: int = 2) -> ProblemSpec:
    """Unshifted sphere on [-5, 5]^dim"""
    return ProblemSpec(
        name="sphere",
        dim=dim,
        lower_bounds=np.full(dim, -5.0),
        upper_bounds=np.full(dim, 5.0),
        function=lambda X: np.sum(X**2, axis=1),
        known_optimum=0.0,
    )


class TestBudgetedEvaluator:
    """Test suite for budgeted evaluation"""

    def test_sphere_at_origin(self):
        """Test that the sphere evaluates to 0 at the origin and counts the call"""
        evaluator = BudgetedEvaluator(make_sphere(), budget=10)
        assert evaluator.evaluate(np.zeros(2)) == 0.0
        assert evaluator.used == 1
        assert evaluator.remaining == 9

    def test_call_past_budget_raises(self):
        """Test that the (budget+1)-th call raises BudgetExhausted"""
        evaluator = BudgetedEvaluator(make_sphere(), budget=3)
        for _ in range(3):
            evaluator(np.ones(2))
        assert evaluator.exhausted
        with pytest.raises(BudgetExhausted):
            evaluator(np.ones(2))
        assert evaluator.used == 3

    def test_dimension_mismatch_is_not_counted(self):
        """Test that a wrong-length vector raises without spending budget"""
        evaluator = BudgetedEvaluator(make_sphere(), budget=3)
        with pytest.raises(DimensionMismatch):
            evaluator(np.zeros(3))
        assert evaluator.used == 0

    def test_out_of_bounds_points_are_clipped(self):
        """Test that candidates outside the box are evaluated at their clipped image"""
        evaluator = BudgetedEvaluator(make_sphere(), budget=2)
        assert evaluator(np.array([10.0, -10.0])) == pytest.approx(50.0)
        assert np.array_equal(evaluator.best_x, np.array([5.0, -5.0]))

    def test_trace_is_monotone_best_so_far(self):
        """Test that the trace records raw values and a non-increasing best"""
        evaluator = BudgetedEvaluator(make_sphere(), budget=4)
        for x in ([3.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 0.0]):
            evaluator(np.array(x))
        assert [entry.raw for entry in evaluator.trace] == [9.0, 1.0, 4.0, 0.0]
        assert list(evaluator.best_so_far()) == [9.0, 1.0, 1.0, 0.0]
        assert [entry.evaluation for entry in evaluator.trace] == [1, 2, 3, 4]

    def test_non_finite_values_are_replaced(self):
        """Test that NaN objective values become the largest float"""
        problem = ProblemSpec("nan", 1, np.array([0.0]), np.array([1.0]), lambda X: np.full(len(X), np.nan))
        evaluator = BudgetedEvaluator(problem, budget=1)
        assert evaluator(np.array([0.5])) == np.finfo(float).max

    def test_maximization_is_minimized_as_one_minus_value(self):
        """Test the conversion of maximization problems"""
        problem = ProblemSpec(
            "reflectance", 1, np.array([0.0]), np.array([1.0]), lambda X: X[:, 0], maximize=True
        )
        evaluator = BudgetedEvaluator(problem, budget=1)
        assert evaluator(np.array([0.75])) == pytest.approx(0.25)

    def test_random_call_counts_stop_at_budget(self):
        """Test that random call counts never push usage past the budget"""
        rng = np.random.default_rng(11)
        for _ in range(200):
            budget = int(rng.integers(1, 40))
            calls = int(rng.integers(0, 80))
            evaluator = BudgetedEvaluator(make_sphere(), budget=budget)
            accepted = refused = 0
            for _ in range(calls):
                try:
                    evaluator(rng.uniform(-5.0, 5.0, size=2))
                    accepted += 1
                except BudgetExhausted:
                    refused += 1
                assert evaluator.used <= budget
            assert accepted == min(calls, budget)
            assert refused == max(0, calls - budget)
            assert len(evaluator.trace) == evaluator.used

    def test_zero_budget_rejected(self):
        """Test that a non-positive budget is refused"""
        with pytest.raises(ValueError):
            BudgetedEvaluator(make_sphere(), budget=0)


class TestBudgetLedger:
    """Test suite for evaluation accounting"""

    def test_evaluator_charges_ledger(self):
        """Test that each evaluation is charged to its phase and kind"""
        ledger = BudgetLedger()
        evaluator = BudgetedEvaluator(make_sphere(), 5, ledger, Phase.DISCOVERY, EvalKind.PROXY)
        for _ in range(5):
            evaluator(np.zeros(2))
        assert ledger.count(Phase.DISCOVERY, EvalKind.PROXY) == 5
        assert ledger.proxy_evals == 5
        assert ledger.target_evals == 0

    def test_baseline_target_evals_are_excluded(self):
        """Test that baseline runs do not count as target evaluations"""
        ledger = BudgetLedger()
        ledger.charge(Phase.BASELINE, EvalKind.TARGET, 100)
        ledger.charge(Phase.VALIDATION, EvalKind.TARGET, 30)
        assert ledger.target_evals == 30

    def test_h2_ratio(self):
        """Test the direct-equivalent ratio and its undefined case"""
        ledger = BudgetLedger()
        assert ledger.h2_ratio(900) is None
        ledger.charge(Phase.VALIDATION, EvalKind.TARGET, 30)
        assert ledger.h2_ratio(900) == pytest.approx(30.0)

    def test_sample_evals_tracked_separately(self):
        """Test that design-sample evaluations are not algorithm target evaluations"""
        ledger = BudgetLedger()
        ledger.charge_sample(1500)
        assert ledger.sample_evals == 1500
        assert ledger.target_evals == 0

    def test_merge_and_dict_form(self):
        """Test merging two ledgers and rebuilding one from its dict form"""
        a, b = BudgetLedger(), BudgetLedger()
        a.charge(Phase.GENERATION, EvalKind.PROXY, 10)
        b.charge(Phase.VALIDATION, EvalKind.TARGET, 3)
        b.charge_sample(7)
        a.merge(b)
        rebuilt = BudgetLedger.from_dict(a.to_dict())
        assert rebuilt.proxy_evals == 10
        assert rebuilt.target_evals == 3
        assert rebuilt.sample_evals == 7
        assert a.to_dict()["phases"]["validation"]["target"] == 3
