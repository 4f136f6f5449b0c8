"""Tests for design sampling and ELA feature computation"""

import numpy as np
import pytest

from proxyforge.core.budget import BudgetLedger, EvalKind, Phase
from proxyforge.core.errors import BudgetExhausted, DegenerateSample
from proxyforge.core.problem import ProblemSpec
from proxyforge.core.rng import RandomStream
from proxyforge.ela.features import (
    DEFAULT_FEATURE_SETS,
    FEATURE_SETS,
    compute_features,
    feature_names,
    information_content,
    nearest_neighbor_tour,
    y_distribution_features,
)
from proxyforge.ela.sampling import LHS_SAMPLER, DesignSample, sample_design


def make_problem(function, dim: int = 2) -> ProblemSpec:
    return ProblemSpec("f", dim, np.full(dim, -5.0), np.full(dim, 5.0), function)


def sphere(X):
    return np.sum(X**2, axis=1)


class TestSampling:
    """Test suite for Latin hypercube designs"""

    def test_design_size_and_bounds(self):
        """Test that the design has coef x D rows inside the box"""
        sample = sample_design(make_problem(sphere, 3), 20, RandomStream(0))
        assert sample.size == 60
        assert sample.dim == 3
        assert np.all(sample.X >= -5.0) and np.all(sample.X <= 5.0)
        assert sample.sampler_id == LHS_SAMPLER

    def test_latin_hypercube_strata(self):
        """Test that each dimension has exactly one point per stratum"""
        sample = sample_design(make_problem(sphere, 2), 10, RandomStream(1))
        n = sample.size
        for column in range(2):
            strata = np.floor((sample.X[:, column] + 5.0) / 10.0 * n).astype(int)
            assert sorted(strata) == list(range(n))

    def test_design_is_seeded(self):
        """Test that the same stream reproduces the same design"""
        a = sample_design(make_problem(sphere), 10, RandomStream(4, (0,)))
        b = sample_design(make_problem(sphere), 10, RandomStream(4, (0,)))
        assert np.array_equal(a.X, b.X)

    def test_target_evaluations_charged_as_samples(self):
        """Test ledger accounting of target designs"""
        ledger = BudgetLedger()
        sample_design(make_problem(sphere), 10, RandomStream(0), ledger)
        assert ledger.sample_evals == 20
        assert ledger.target_evals == 0

    def test_pool_evaluations_charged_as_proxy(self):
        """Test ledger accounting of synthetic-pool designs"""
        ledger = BudgetLedger()
        sample_design(make_problem(sphere), 10, RandomStream(0), ledger, target=False)
        assert ledger.count(Phase.GENERATION, EvalKind.PROXY) == 20
        assert ledger.sample_evals == 0

    def test_design_over_budget(self):
        """Test that a design larger than the budget is refused"""
        with pytest.raises(BudgetExhausted):
            sample_design(make_problem(sphere), 10, RandomStream(0), budget=19)


class TestComputeFeatures:
    """Test suite for the feature sets"""

    def sample(self, function, n_per_dim: int = 50, dim: int = 2) -> DesignSample:
        return sample_design(make_problem(function, dim), n_per_dim, RandomStream(7))

    def test_all_feature_names_returned(self):
        """Test that every feature of every set is present in order"""
        features = compute_features(self.sample(sphere))
        assert list(features) == feature_names()
        assert len(DEFAULT_FEATURE_SETS) == len(FEATURE_SETS)

    def test_quadratic_model_fits_sphere(self):
        """Test that the quadratic meta-model explains the sphere exactly"""
        features = compute_features(self.sample(sphere))
        assert features["meta.quad_adj_r2"] == pytest.approx(1.0)
        assert features["meta.lin_adj_r2"] < 0.5

    def test_linear_model_fits_plane(self):
        """Test that the linear meta-model explains a plane exactly"""
        features = compute_features(self.sample(lambda X: 2.0 * X[:, 0] - X[:, 1]))
        assert features["meta.lin_adj_r2"] == pytest.approx(1.0)

    def test_feature_set_subset(self):
        """Test that only requested sets are computed"""
        features = compute_features(self.sample(sphere), ["meta_model", "nbc"])
        assert list(features) == feature_names(["meta_model", "nbc"])

    def test_unknown_feature_set(self):
        """Test that unknown set names are rejected"""
        with pytest.raises(KeyError):
            feature_names(["nope"])

    def test_constant_objective_is_degenerate(self):
        """Test that a flat landscape cannot be characterized"""
        with pytest.raises(DegenerateSample):
            compute_features(self.sample(lambda X: np.ones(len(X))))

    def test_non_finite_objective_is_degenerate(self):
        """Test that NaN values are rejected"""
        sample = self.sample(sphere)
        y = sample.y.copy()
        y[0] = np.nan
        with pytest.raises(DegenerateSample):
            compute_features(sample.with_values(y))

    def test_too_few_points_is_degenerate(self):
        """Test the 10 x D minimum sample size"""
        with pytest.raises(DegenerateSample):
            compute_features(self.sample(sphere, n_per_dim=5))

    def test_nearest_better_never_closer_than_nearest(self):
        """Test that the nearest-better to nearest-neighbor ratio is at least 1"""
        features = compute_features(self.sample(sphere), ["nbc"])
        assert features["nbc.nb_nn_ratio"] >= 1.0

    def test_symmetric_values_have_no_skew(self):
        """Test that a mirrored objective sample has zero skewness"""
        X = np.random.default_rng(1).uniform(-5.0, 5.0, size=(20, 1))
        y = np.concatenate([X[:10, 0], -X[:10, 0]])
        skewness = y_distribution_features(X, y, np.zeros((20, 20)))[0]
        assert skewness == pytest.approx(0.0, abs=1e-9)

    def test_translation_robust_sets(self):
        """Test that adding a constant to y leaves dispersion, NBC and PCA features unchanged"""
        sample = self.sample(sphere)
        shifted = sample.with_values(sample.y + 100.0)
        sets = ["dispersion", "nbc", "pca"]
        original = compute_features(sample, sets)
        moved = compute_features(shifted, sets)
        assert list(moved) == list(original)
        assert dict(moved) == pytest.approx(dict(original), rel=1e-9, nan_ok=True)

    def test_information_content_of_constant_walk(self):
        """Test that a walk without changes carries no information"""
        assert information_content(np.zeros(10, dtype=int)) == 0.0

    def test_nearest_neighbor_tour_visits_every_point(self):
        """Test that the tour is a permutation"""
        X = np.random.default_rng(0).uniform(size=(15, 2))
        distances = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
        tour = nearest_neighbor_tour(distances)
        assert sorted(tour) == list(range(15))
