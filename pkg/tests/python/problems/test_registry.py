"""Tests for the photonic problems, the synthetic suite and the registry"""

import numpy as np
import pytest

from proxyforge.core.errors import UnknownFunctionId, UnknownProblem
from proxyforge.problems.photonics import (
    BRAGG_INDEX_HIGH,
    BRAGG_INDEX_LOW,
    ellipsometry_ground_truth,
    make_bragg_problem,
    make_ellipsometry_problem,
    make_photovoltaic_problem,
    quarter_wave_thicknesses,
    solution_spectrum,
)
from proxyforge.problems.registry import ProblemRegistry, get_problem
from proxyforge.problems.synthetic import FUNCTION_IDS, make_instance, synthetic
from proxyforge.problems.thin_film import quarter_wave_reflectance


class TestPhotonicProblems:
    """Test suite for the layered-optics targets"""

    def test_mini_bragg_shape(self):
        """Test dimension, bounds and direction of the 10-layer mirror"""
        problem = make_bragg_problem(10)
        assert problem.name == "mini-bragg"
        assert problem.dim == 10
        assert problem.maximize
        assert np.all(problem.lower_bounds == 0.0)
        assert np.all(problem.upper_bounds == 218.0)

    def test_bragg_has_twenty_layers(self):
        """Test the larger instance"""
        assert make_bragg_problem(20).dim == 20

    def test_unsupported_layer_count(self):
        """Test that only 10 and 20 layers are supported"""
        with pytest.raises(ValueError):
            make_bragg_problem(12)

    def test_quarter_wave_point_value(self):
        """Test that the minimized value at the quarter-wave design is 1 - R"""
        problem = make_bragg_problem(10)
        reflectance = quarter_wave_reflectance(BRAGG_INDEX_LOW, BRAGG_INDEX_HIGH, 5, 1.0, 1.5)
        assert problem.value(quarter_wave_thicknesses(10)) == pytest.approx(1.0 - reflectance, rel=1e-6)

    def test_ellipsometry_zero_at_ground_truth(self):
        """Test that the inverse problem is solved exactly by the hidden layer"""
        problem = make_ellipsometry_problem()
        truth = ellipsometry_ground_truth()
        assert problem.value(truth) == pytest.approx(0.0, abs=1e-12)
        assert problem.value(truth + np.array([10.0, 0.0])) > 0.0

    def test_ellipsometry_truth_inside_bounds(self):
        """Test that the hidden layer lies inside the search box"""
        problem = make_ellipsometry_problem()
        truth = ellipsometry_ground_truth()
        assert np.all(truth >= problem.lower_bounds)
        assert np.all(truth <= problem.upper_bounds)

    def test_photovoltaic_absorption_in_unit_interval(self):
        """Test that mean absorption is a fraction"""
        problem = make_photovoltaic_problem()
        X = np.random.default_rng(0).uniform(problem.lower_bounds, problem.upper_bounds, size=(5, problem.dim))
        natural = problem.function(X)
        assert np.all((natural >= 0.0) & (natural <= 1.0))

    def test_solution_spectrum(self):
        """Test spectra of stack problems and their absence for synthetics"""
        wavelengths, R, T = solution_spectrum(make_bragg_problem(10), quarter_wave_thicknesses(10))
        assert wavelengths.shape == R.shape == T.shape
        assert solution_spectrum(synthetic("sphere", 2), np.zeros(2)) is None


class TestSyntheticSuite:
    """Test suite for shifted synthetic functions"""

    @pytest.mark.parametrize("function_id", FUNCTION_IDS)
    def test_optimum_at_shift(self, function_id):
        """Test that every function reaches 0 at its shift"""
        problem = synthetic(function_id, 4, seed=3)
        shift = np.asarray(problem.metadata["shift"])
        assert problem.value(shift) == pytest.approx(0.0, abs=1e-9)
        assert problem.known_optimum == 0.0

    def test_shift_is_seeded(self):
        """Test that the shift depends only on the seed"""
        a = make_instance("rastrigin", 5, seed=1).shift
        b = make_instance("rastrigin", 5, seed=1).shift
        c = make_instance("rastrigin", 5, seed=2).shift
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_unknown_function(self):
        """Test that unknown ids raise UnknownFunctionId"""
        with pytest.raises(UnknownFunctionId):
            synthetic("nope", 2)


class TestProblemRegistry:
    """Test suite for name-based problem lookup"""

    def test_registered_names(self):
        """Test the photonic entries"""
        assert ProblemRegistry().names() == ["bragg", "ellipsometry", "mini-bragg", "photovoltaic"]

    def test_synthetic_names(self):
        """Test synthetic:<id>:<dim> names"""
        problem = get_problem("synthetic:sphere:5")
        assert problem.dim == 5
        assert problem.name == "synthetic:sphere:5"

    @pytest.mark.parametrize("name", ["nope", "synthetic:sphere", "synthetic:sphere:0", "synthetic:sphere:x"])
    def test_unknown_names(self, name):
        """Test that malformed or unknown names raise UnknownProblem"""
        registry = ProblemRegistry()
        assert not registry.is_registered(name)
        with pytest.raises(UnknownProblem):
            registry.get(name)

    def test_unknown_synthetic_id(self):
        """Test that an unknown synthetic id is an UnknownProblem too"""
        with pytest.raises(UnknownProblem):
            get_problem("synthetic:nope:3")

    def test_synthetic_pool(self):
        """Test that the pool holds every synthetic function at the dimension"""
        pool = ProblemRegistry().synthetic_pool(3)
        assert len(pool) == len(FUNCTION_IDS)
        assert all(p.dim == 3 for p in pool)

    def test_describe(self):
        """Test that descriptions include the registry text"""
        info = ProblemRegistry().describe("mini-bragg")
        assert info["dim"] == 10
        assert "Bragg" in info["description"]
