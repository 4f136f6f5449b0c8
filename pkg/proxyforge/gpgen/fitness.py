"""Landscape-similarity fitness of a candidate tree"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core.rng import RandomStream
from ..ela.distribution import FeatureDistribution, feature_distribution, impute_non_finite
from ..ela.features import CONSTANT_Y_TOLERANCE
from ..ela.sampling import DesignSample
from ..ela.similarity import landscape_distance
from .evaluator import compile_tree
from .types import ExpressionTree

logger = logging.getLogger(__name__)

PENALTY = 1e9


@dataclass
class ProxyCandidate:
    """A tree with its fitness

    Attributes:
        tree: Expression tree
        fitness: Landscape distance to the target, PENALTY when invalid
        valid: False when the tree was penalized
    """

    tree: ExpressionTree
    fitness: float
    valid: bool

    @property
    def key(self) -> str:
        return self.tree.key()

    def to_dict(self) -> dict:
        return {"tree": self.key, "fitness": self.fitness, "valid": self.valid}


def is_invalid_output(y: np.ndarray) -> bool:
    """True when y holds NaN/Inf or is constant"""
    return not np.all(np.isfinite(y)) or float(np.ptp(y)) < CONSTANT_Y_TOLERANCE


def fitness(
    tree: ExpressionTree,
    X: np.ndarray,
    target: FeatureDistribution,
    rate_ela: float,
    n_ela: int,
    rng: RandomStream,
    feature_sets: Optional[Sequence[str]] = None,
    penalty: float = PENALTY,
) -> float:
    """Landscape distance between a tree evaluated on X and the target

    Non-finite candidate features are imputed over the pair (candidate,
    target) on a copy of the target, so a feature the candidate cannot
    produce sits at the extreme of the target's values.

    Args:
        tree: Candidate tree
        X: Design points the target distribution was built on
        target: Target feature distribution (its retained list is used)
        rate_ela: Subsample rate
        n_ela: Number of subsamples
        rng: Subsampling stream, shared by all candidates of a run
        feature_sets: Feature sets to compute, all when None
        penalty: Fitness of invalid candidates

    Returns:
        Distance >= 0, or penalty
    """
    try:
        y = compile_tree(tree)(X)
        if is_invalid_output(y):
            return penalty
        dist = feature_distribution(DesignSample(X, y), rate_ela, n_ela, rng, feature_sets)
        if not all(name in dist.features for name in target.retained):
            return penalty
        reference = target.restrict(target.retained)
        impute_non_finite([dist, reference])
        value = landscape_distance(dist.restrict(target.retained), reference)
    except Exception as e:  # any pathology of a random program is penalized
        logger.debug("Penalized %s: %s", tree.key(), e)
        return penalty
    return value if np.isfinite(value) else penalty


def evaluate_candidate(
    tree: ExpressionTree,
    X: np.ndarray,
    target: FeatureDistribution,
    rate_ela: float,
    n_ela: int,
    rng: RandomStream,
    feature_sets: Optional[Sequence[str]] = None,
    penalty: float = PENALTY,
) -> ProxyCandidate:
    value = fitness(tree, X, target, rate_ela, n_ela, rng, feature_sets, penalty)
    return ProxyCandidate(tree, value, value < penalty)
