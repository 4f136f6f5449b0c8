"""Tests for proxy fitness, the GP loop and proxy problems"""

from collections import OrderedDict

import numpy as np
import pytest

from proxyforge.core.errors import NoValidCandidate
from proxyforge.core.metrics import aocc
from proxyforge.core.problem import ProblemSpec
from proxyforge.core.rng import RandomStream
from proxyforge.ela.distribution import FeatureDistribution, feature_distribution
from proxyforge.ela.sampling import sample_design
from proxyforge.ela.similarity import wasserstein_1d
from proxyforge.gpgen.evolve import GPParams, evolve, top_k, tournament
from proxyforge.gpgen.fitness import PENALTY, ProxyCandidate, fitness, is_invalid_output
from proxyforge.gpgen.proxy import REFERENCE_MARGIN, proxy_problem, proxy_problem_from_text, reference_optimum
from proxyforge.gpgen.serializer import parse_prefix

FEATURE_SETS = ["meta_model", "dispersion"]


def make_target() -> ProblemSpec:
    return ProblemSpec("sphere", 2, np.full(2, -5.0), np.full(2, 5.0), lambda X: np.sum(X**2, axis=1))


def target_distribution(stream: RandomStream):
    sample = sample_design(make_target(), 20, RandomStream(0))
    return sample.X, feature_distribution(sample, 0.8, 3, stream, FEATURE_SETS)


def candidate(text: str, value: float, valid: bool = True) -> ProxyCandidate:
    return ProxyCandidate(parse_prefix(text), value, valid)


class TestFitness:
    """Test suite for landscape-similarity fitness"""

    def test_identical_landscape_scores_zero(self):
        """Test that the target's own function is at distance 0 with a shared stream"""
        X, target = target_distribution(RandomStream(9))
        value = fitness(parse_prefix("sum(square(x))"), X, target, 0.8, 3, RandomStream(9), FEATURE_SETS)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_constant_tree_is_penalized(self):
        """Test that a flat proxy receives the penalty"""
        X, target = target_distribution(RandomStream(1))
        assert fitness(parse_prefix("a=3.0"), X, target, 0.8, 3, RandomStream(1), FEATURE_SETS) == PENALTY

    def test_other_landscape_is_positive(self):
        """Test that a different landscape is at positive distance"""
        X, target = target_distribution(RandomStream(1))
        value = fitness(parse_prefix("sum(sin(x))"), X, target, 0.8, 3, RandomStream(1), FEATURE_SETS)
        assert 0.0 < value < PENALTY

    def test_missing_feature_imputed_against_target(self, monkeypatch):
        """Test that a feature the candidate cannot produce is charged, not ignored"""
        monkeypatch.setattr(
            "proxyforge.ela.distribution.compute_features",
            lambda sample, feature_sets=None: {"f1": float("nan"), "f2": 1.0},
        )
        monkeypatch.setattr("proxyforge.ela.distribution.feature_names", lambda feature_sets=None: ["f1", "f2"])
        X, _ = target_distribution(RandomStream(1))
        target = FeatureDistribution(OrderedDict([("f1", [38.0, 39.0, 40.0, 41.0, 42.0]), ("f2", [1.0] * 5)]))

        value = fitness(parse_prefix("sum(square(x))"), X, target, 0.8, 3, RandomStream(1))

        a = np.full(3, 42.0)
        b = np.array(target.features["f1"])
        pooled = np.concatenate([a, b])
        expected = wasserstein_1d((a - pooled.mean()) / pooled.std(), (b - pooled.mean()) / pooled.std()) / 2
        assert value == pytest.approx(expected)
        assert value > 0.0
        assert target.features["f1"] == [38.0, 39.0, 40.0, 41.0, 42.0]

    def test_invalid_output_detection(self):
        """Test NaN and constant outputs"""
        assert is_invalid_output(np.array([1.0, np.nan]))
        assert is_invalid_output(np.ones(4))
        assert not is_invalid_output(np.array([1.0, 2.0]))


class TestSelection:
    """Test suite for tournament and proxy extraction"""

    def test_top_k_distinct_and_valid(self):
        """Test that extraction skips penalized and duplicate trees"""
        pool = [
            candidate("sum(x)", 0.3),
            candidate("sum(x)", 0.3),
            candidate("max(x)", 0.1, valid=False),
            candidate("mean(x)", 0.5),
            candidate("prod(x)", 0.2),
        ]
        assert [c.key for c in top_k(pool, 2)] == ["prod(x)", "sum(x)"]
        assert len(top_k(pool, 10)) == 3

    def test_tournament_of_whole_population_picks_best(self):
        """Test that a large tournament returns a minimum-fitness individual"""
        pool = [candidate("sum(x)", 0.3), candidate("max(x)", 0.1), candidate("mean(x)", 0.5)]
        winner = tournament(pool, 50, RandomStream(0))
        assert winner.key == "max(x)"

    def test_penalized_never_beats_valid(self):
        """Test that a tournament holding any valid candidate returns a valid one"""
        draws = np.random.default_rng(5)
        texts = ["sum(x)", "max(x)", "mean(x)", "prod(x)", "sum(square(x))", "max(cum(x))"]
        for seed in range(500):
            pool = []
            for text in texts:
                if draws.random() < 0.3:
                    pool.append(candidate(text, float(draws.uniform(0.0, 10.0))))
                else:
                    pool.append(candidate(text, PENALTY, valid=False))
            winner = tournament(pool, 3, RandomStream(seed))
            picks = RandomStream(seed).draw_integers(0, len(pool), size=3)
            assert winner.valid == any(pool[int(i)].valid for i in picks)


class TestEvolve:
    """Test suite for the GP loop"""

    PARAMS = GPParams(n_pop=6, n_gen=2, min_depth=3, max_depth=5, k=2, use_rand=False)

    def test_archive_sorted_and_history_monotone(self):
        """Test the run outcome"""
        X, target = target_distribution(RandomStream(2))
        result = evolve(target, X, self.PARAMS, RandomStream(3), 0.8, 3, FEATURE_SETS)
        fitnesses = [c.fitness for c in result.archive]
        assert fitnesses == sorted(fitnesses)
        assert len(result.history) == self.PARAMS.n_gen + 1
        assert all(b <= a for a, b in zip(result.history, result.history[1:]))
        assert result.best.fitness == result.history[-1]
        assert len(result.population) == self.PARAMS.n_pop

    def test_seeded_runs_repeat(self):
        """Test that the same stream gives the same archive"""
        X, target = target_distribution(RandomStream(2))
        a = evolve(target, X, self.PARAMS, RandomStream(4), 0.8, 3, FEATURE_SETS)
        b = evolve(target, X, self.PARAMS, RandomStream(4), 0.8, 3, FEATURE_SETS)
        assert [c.key for c in a.archive] == [c.key for c in b.archive]

    def test_seeded_sphere_runs_improve(self):
        """Test that the best tree beats the initial median on at least 9 of 10 seeds"""
        X, target = target_distribution(RandomStream(2))
        params = GPParams(n_pop=10, n_gen=3, min_depth=3, max_depth=5, k=2, use_rand=False)
        improved = 0
        for seed in range(10):
            result = evolve(target, X, params, RandomStream(seed), 0.8, 3, FEATURE_SETS)
            improved += result.best.fitness < np.median(result.initial_fitness)
        assert improved >= 9

    def test_all_penalized_raises(self):
        """Test that a run without any valid tree raises NoValidCandidate"""
        X, _ = target_distribution(RandomStream(2))
        unreachable = FeatureDistribution(OrderedDict([("not.a.feature", [1.0, 2.0, 3.0])]))
        with pytest.raises(NoValidCandidate):
            evolve(unreachable, X, GPParams(n_pop=4, n_gen=0, max_depth=4), RandomStream(0), 0.8, 3, FEATURE_SETS)

    def test_invalid_params(self):
        """Test the hyperparameter checks"""
        with pytest.raises(ValueError):
            GPParams(min_depth=2).validate()
        with pytest.raises(ValueError):
            GPParams(p_c=1.5).validate()


class TestProxyProblem:
    """Test suite for trees wrapped as problems"""

    def test_proxy_shares_target_box(self):
        """Test dimension, bounds and name of a proxy problem"""
        target = make_target()
        problem = proxy_problem_from_text("sum(square(x))", target, name="proxy-1")
        assert problem.name == "proxy-1"
        assert problem.dim == target.dim
        assert np.array_equal(problem.lower_bounds, target.lower_bounds)
        assert problem.value(np.array([1.0, 2.0])) == pytest.approx(5.0)

    def test_reference_below_design_minimum(self):
        """Test that the reference optimum sits under the best design value"""
        X = np.array([[1.0, 1.0], [0.5, 0.0], [3.0, 0.0]])
        problem = proxy_problem(parse_prefix("sum(square(x))"), make_target(), X)
        assert problem.metadata["design_minimum"] == pytest.approx(0.25)
        assert problem.metadata["target"] == "sphere"
        assert problem.known_optimum == pytest.approx(0.25 - REFERENCE_MARGIN * (2.0 - 0.25))

    def test_runs_beating_the_design_still_separate(self):
        """Test that improving on the design minimum raises AOCC instead of saturating"""
        X = np.array([[1.0, 1.0], [0.5, 0.0], [3.0, 0.0]])
        problem = proxy_problem(parse_prefix("sum(square(x))"), make_target(), X)
        lo, hi = problem.clip_range
        at_design = aocc([0.25], 1, lo, hi, problem.known_optimum)
        beyond = aocc([0.1], 1, lo, hi, problem.known_optimum)
        assert 0.0 < at_design < beyond < 1.0

    def test_no_design_no_reference(self):
        """Test that a proxy without design points has no reference optimum"""
        assert proxy_problem_from_text("sum(x)", make_target()).known_optimum is None
        assert reference_optimum(np.array([np.nan, np.inf])) is None
