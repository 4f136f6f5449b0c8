"""Wasserstein similarity between feature distributions"""

from typing import Sequence

import numpy as np
from scipy.stats import wasserstein_distance

from ..core.errors import FeatureMismatch
from .distribution import FeatureDistribution


def wasserstein_1d(a: Sequence[float], b: Sequence[float]) -> float:
    """1-Wasserstein distance between two empirical samples

    Args:
        a: Non-empty sample
        b: Non-empty sample

    Returns:
        Distance >= 0
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise ValueError("Wasserstein distance needs non-empty samples")
    return float(wasserstein_distance(a, b))


def landscape_distance(p: FeatureDistribution, q: FeatureDistribution) -> float:
    """Mean over retained features of W1 between z-scored feature samples

    Both samples of a feature are standardized with the mean and standard
    deviation of their pooled values. A feature that is constant over the
    pool contributes 0.

    Raises:
        FeatureMismatch: If p and q retain different feature lists
    """
    if list(p.retained) != list(q.retained):
        raise FeatureMismatch(
            f"Retained features differ: {len(p.retained)} vs {len(q.retained)} features"
        )
    if not p.retained:
        raise FeatureMismatch("Distributions retain no features")
    distances = []
    for name in p.retained:
        a, b = p.samples(name), q.samples(name)
        pooled = np.sort(np.concatenate([a, b]))
        sd = pooled.std()
        if sd == 0.0 or not np.isfinite(sd):
            distances.append(0.0)
            continue
        mean = pooled.mean()
        distances.append(wasserstein_1d((a - mean) / sd, (b - mean) / sd))
    return float(np.mean(distances))
