"""Exploratory landscape analysis: sampling, features, distributions, similarity"""

from .distribution import (
    DEFAULT_COEF_ELA,
    DEFAULT_N_ELA,
    DEFAULT_RATE_ELA,
    DEFAULT_THRESHOLD_CORR,
    FeatureDistribution,
    align_distributions,
    feature_distribution,
    impute_non_finite,
    prune_correlated,
)
from .features import FEATURE_SETS, FeatureSet, FeatureVector, compute_features, feature_names
from .sampling import DesignSample, design_points, sample_design
from .similarity import landscape_distance, wasserstein_1d

__all__ = [
    "DEFAULT_COEF_ELA",
    "DEFAULT_N_ELA",
    "DEFAULT_RATE_ELA",
    "DEFAULT_THRESHOLD_CORR",
    "DesignSample",
    "FEATURE_SETS",
    "FeatureDistribution",
    "FeatureSet",
    "FeatureVector",
    "align_distributions",
    "compute_features",
    "design_points",
    "feature_distribution",
    "feature_names",
    "impute_non_finite",
    "landscape_distance",
    "prune_correlated",
    "sample_design",
    "wasserstein_1d",
]
