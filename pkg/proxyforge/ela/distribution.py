"""Per-feature empirical distributions and correlation pruning"""

import json
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import EmptyRetention
from ..core.rng import RandomStream
from .features import compute_features, feature_names
from .sampling import DesignSample

logger = logging.getLogger(__name__)

DEFAULT_COEF_ELA = 150
DEFAULT_RATE_ELA = 0.8
DEFAULT_N_ELA = 5
DEFAULT_THRESHOLD_CORR = 0.9


@dataclass
class FeatureDistribution:
    """n_ELA subsample values of every feature of one function

    Attributes:
        features: Ordered mapping feature name -> n_ELA values
        retained: Features kept after correlation pruning, in feature order
        coef_ela: Sample-size coefficient of the design
        rate_ela: Subsample rate
        n_ela: Number of subsamples
        sampler_seed: Seed of the design sampler
    """

    features: Dict[str, List[float]]
    retained: List[str] = field(default_factory=list)
    coef_ela: int = DEFAULT_COEF_ELA
    rate_ela: float = DEFAULT_RATE_ELA
    n_ela: int = DEFAULT_N_ELA
    sampler_seed: Optional[int] = None

    def __post_init__(self) -> None:
        self.features = OrderedDict((name, [float(v) for v in values]) for name, values in self.features.items())
        if not self.retained:
            self.retained = list(self.features)

    @property
    def feature_names(self) -> List[str]:
        return list(self.features)

    def samples(self, name: str) -> np.ndarray:
        return np.asarray(self.features[name], dtype=float)

    def matrix(self, names: Optional[Sequence[str]] = None) -> np.ndarray:
        """Subsample-by-feature matrix, shape (n_ela, F)"""
        names = list(names) if names is not None else self.retained
        return np.column_stack([self.samples(name) for name in names])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(self.samples(name))) for name in self.features)

    def restrict(self, retained: Sequence[str]) -> "FeatureDistribution":
        """Copy of this distribution keeping all values but retaining only `retained`"""
        missing = [name for name in retained if name not in self.features]
        if missing:
            raise KeyError(f"Features not in distribution: {missing}")
        return FeatureDistribution(
            OrderedDict((name, list(values)) for name, values in self.features.items()),
            list(retained),
            self.coef_ela,
            self.rate_ela,
            self.n_ela,
            self.sampler_seed,
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "features": {name: list(values) for name, values in self.features.items()},
            "retained": list(self.retained),
            "coef_ELA": self.coef_ela,
            "rate_ELA": self.rate_ela,
            "n_ELA": self.n_ela,
            "sampler_seed": self.sampler_seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "FeatureDistribution":
        return cls(
            OrderedDict(data["features"].items()),
            list(data.get("retained", [])),
            int(data.get("coef_ELA", DEFAULT_COEF_ELA)),
            float(data.get("rate_ELA", DEFAULT_RATE_ELA)),
            int(data.get("n_ELA", DEFAULT_N_ELA)),
            data.get("sampler_seed"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write_json(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path

    @classmethod
    def read_json(cls, path: Path) -> "FeatureDistribution":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def impute_non_finite(dists: Sequence[FeatureDistribution]) -> int:
    """Replace non-finite feature values in place across a comparison pool

    Each non-finite value becomes the finite value of largest magnitude
    observed for that feature anywhere in the pool (0.0 if there is none).

    Returns:
        Number of imputed values
    """
    imputed = 0
    names = dists[0].feature_names if dists else []
    for name in names:
        pooled = np.concatenate([dist.samples(name) for dist in dists if name in dist.features])
        finite = pooled[np.isfinite(pooled)]
        worst = float(finite[np.argmax(np.abs(finite))]) if finite.size else 0.0
        for dist in dists:
            if name not in dist.features:
                continue
            values = dist.samples(name)
            bad = ~np.isfinite(values)
            if np.any(bad):
                values[bad] = worst
                dist.features[name] = values.tolist()
                imputed += int(bad.sum())
    if imputed:
        logger.debug("Imputed %d non-finite feature values", imputed)
    return imputed


def subsample_rows(n_rows: int, rate_ela: float, rng: RandomStream) -> np.ndarray:
    """Row indices of one subsample of size round(rate_ela * n_rows), no replacement"""
    size = max(1, int(round(rate_ela * n_rows)))
    return np.sort(rng.generator.choice(n_rows, size=size, replace=False))


def feature_distribution(
    sample: DesignSample,
    rate_ela: float,
    n_ela: int,
    rng: RandomStream,
    feature_sets: Optional[Sequence[str]] = None,
    coef_ela: Optional[int] = None,
    workers: int = 1,
) -> FeatureDistribution:
    """Build a feature distribution from n_ela random subsamples

    Args:
        sample: Full design sample
        rate_ela: Subsample rate in (0, 1]
        n_ela: Number of subsamples, >= 2
        rng: Random stream; subsample i draws from rng.child(i)
        feature_sets: Feature sets to compute, all when None
        coef_ela: Recorded sample-size coefficient, derived from N/D when None
        workers: Thread count for subsample feature computation

    Returns:
        FeatureDistribution; non-finite values are kept so that the caller
        can impute them across its comparison pool

    Raises:
        DegenerateSample: Propagated from compute_features
    """
    if not 0.0 < rate_ela <= 1.0:
        raise ValueError(f"rate_ELA must be in (0, 1], got {rate_ela}")
    if n_ela < 2:
        raise ValueError(f"n_ELA must be >= 2, got {n_ela}")
    subsets = [sample.subset(subsample_rows(sample.size, rate_ela, rng.child(i))) for i in range(n_ela)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vectors = list(pool.map(lambda s: compute_features(s, feature_sets), subsets))
    else:
        vectors = [compute_features(s, feature_sets) for s in subsets]

    names = feature_names(feature_sets)
    features = OrderedDict((name, [vector[name] for vector in vectors]) for name in names)
    dist = FeatureDistribution(
        features,
        list(names),
        coef_ela if coef_ela is not None else sample.size // max(sample.dim, 1),
        rate_ela,
        n_ela,
        sample.seed,
    )
    if not dist.is_finite():
        logger.debug("Feature distribution of %d points holds non-finite values", sample.size)
    return dist


def prune_correlated(dists: Sequence[FeatureDistribution], threshold_corr: float = DEFAULT_THRESHOLD_CORR) -> List[str]:
    """Greedy forward selection of weakly correlated features

    Correlations are computed over the pooled subsample vectors of every
    distribution. A feature is kept unless its absolute Pearson
    correlation with an already kept feature exceeds threshold_corr.
    Features that are constant over the pool carry no information and
    are dropped.

    Args:
        dists: Distributions under comparison
        threshold_corr: Threshold in (0, 1]

    Returns:
        Retained feature names in feature order

    Raises:
        EmptyRetention: If no feature survives
    """
    if not dists:
        raise ValueError("Correlation pruning needs at least one distribution")
    if not 0.0 < threshold_corr <= 1.0:
        raise ValueError(f"threshold_corr must be in (0, 1], got {threshold_corr}")
    candidates = [name for name in dists[0].retained if all(name in d.features for d in dists)]
    pooled = np.vstack([dist.matrix(candidates) for dist in dists])

    kept: List[int] = []
    for index in range(len(candidates)):
        column = pooled[:, index]
        if not np.all(np.isfinite(column)) or np.ptp(column) == 0.0:
            continue
        redundant = False
        for other in kept:
            with np.errstate(all="ignore"):
                corr = np.corrcoef(column, pooled[:, other])[0, 1]
            if np.isfinite(corr) and abs(corr) > threshold_corr:
                redundant = True
                break
        if not redundant:
            kept.append(index)
    if not kept:
        raise EmptyRetention("No feature survived correlation pruning")
    return [candidates[i] for i in kept]


def align_distributions(
    dists: Sequence[FeatureDistribution], threshold_corr: float = DEFAULT_THRESHOLD_CORR
) -> Tuple[List[FeatureDistribution], List[str]]:
    """Impute across the pool, prune, and restrict every distribution to the kept list"""
    impute_non_finite(list(dists))
    retained = prune_correlated(dists, threshold_corr)
    return [dist.restrict(retained) for dist in dists], retained
