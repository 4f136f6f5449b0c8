"""Exploratory landscape analysis features

Seven feature sets computed from a design sample (X, y): y-distribution,
level set, meta model, dispersion, nearest-better clustering, principal
components and information content. Feature names and their order are
fixed by FEATURE_SETS; every consumer relies on that order.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats
from scipy.signal import find_peaks
from scipy.spatial.distance import pdist, squareform

from ..core.errors import DegenerateSample
from .sampling import DesignSample

logger = logging.getLogger(__name__)

FeatureVector = Dict[str, float]

CONSTANT_Y_TOLERANCE = 1e-12
MIN_POINTS_PER_DIM = 10
LEVEL_SET_QUANTILES = (0.1, 0.25, 0.5)
DISPERSION_QUANTILES = (0.02, 0.05, 0.1, 0.25)
DISCRIMINANT_RIDGE = 1e-6
KDE_GRID_POINTS = 512
KDE_PROMINENCE = 0.01
QUADRATIC_CROSS_TERMS_MAX_DIM = 20
PCA_VARIANCE_SHARE = 0.9
IC_GRID_POINTS = 30
IC_EPSILON_MIN = 1e-6
IC_SETTLING_THRESHOLD = 0.05


def _pct(q: float) -> str:
    return f"{int(round(q * 100)):02d}"


@dataclass(frozen=True)
class FeatureSet:
    """A named group of features computed together

    Attributes:
        name: Set name
        feature_names: Ordered feature names produced by compute
        compute: Maps (X, y, pairwise distance matrix) to values in
            feature_names order
    """

    name: str
    feature_names: List[str]
    compute: Callable[[np.ndarray, np.ndarray, np.ndarray], List[float]]


# y-distribution ----------------------------------------------------------


def _kde_peaks(y: np.ndarray) -> float:
    try:
        kde = stats.gaussian_kde(y, bw_method="silverman")
    except (np.linalg.LinAlgError, ValueError):
        return float("nan")
    grid = np.linspace(y.min(), y.max(), KDE_GRID_POINTS)
    density = kde(grid)
    padded = np.concatenate([[0.0], density, [0.0]])
    peaks, _ = find_peaks(padded, prominence=KDE_PROMINENCE * density.max())
    return float(len(peaks))


def y_distribution_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    return [float(stats.skew(y)), float(stats.kurtosis(y)), _kde_peaks(y)]


# level set ---------------------------------------------------------------


def _class_covariance(points: np.ndarray) -> np.ndarray:
    dim = points.shape[1]
    if points.shape[0] < 2:
        return np.eye(dim) * DISCRIMINANT_RIDGE
    return np.atleast_2d(np.cov(points, rowvar=False)) + np.eye(dim) * DISCRIMINANT_RIDGE


def discriminant_error(X: np.ndarray, labels: np.ndarray, quadratic: bool) -> float:
    """Resubstitution misclassification rate of LDA or QDA on two classes"""
    classes = [X[labels == c] for c in (False, True)]
    if any(len(points) == 0 for points in classes):
        return float("nan")
    if quadratic:
        covariances = [_class_covariance(points) for points in classes]
    else:
        centered = np.vstack([points - points.mean(axis=0) for points in classes])
        pooled = centered.T @ centered / max(len(X) - 2, 1)
        pooled = np.atleast_2d(pooled) + np.eye(X.shape[1]) * DISCRIMINANT_RIDGE
        covariances = [pooled, pooled]
    scores = []
    for points, cov in zip(classes, covariances):
        prior = np.log(len(points) / len(X))
        log_density = stats.multivariate_normal.logpdf(
            X, mean=points.mean(axis=0), cov=cov, allow_singular=True
        )
        scores.append(np.atleast_1d(log_density) + prior)
    predicted = scores[1] > scores[0]
    return float(np.mean(predicted != labels))


def level_set_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    values = []
    for quadratic in (False, True):
        for q in LEVEL_SET_QUANTILES:
            labels = y <= np.quantile(y, q)
            values.append(discriminant_error(X, labels, quadratic))
    return values


# meta model --------------------------------------------------------------


def _adjusted_r2(design: np.ndarray, y: np.ndarray) -> tuple:
    coefficients, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coefficients
    ss_res = float(residual @ residual)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    n, p = design.shape[0], design.shape[1] - 1
    r2 = 1.0 - ss_res / ss_tot
    if n - p - 1 <= 0:
        return float("nan"), coefficients
    return 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1), coefficients


def _abs_ratio(values: np.ndarray) -> float:
    magnitudes = np.abs(values)
    if magnitudes.min() == 0.0:
        return float("nan")
    return float(magnitudes.max() / magnitudes.min())


def quadratic_design(X: np.ndarray) -> np.ndarray:
    """[1, x, x^2, cross terms]; cross terms only up to the cap dimension"""
    n, d = X.shape
    columns = [np.ones((n, 1)), X, X**2]
    if d <= QUADRATIC_CROSS_TERMS_MAX_DIM:
        rows, cols = np.triu_indices(d, k=1)
        columns.append(X[:, rows] * X[:, cols])
    return np.hstack(columns)


def meta_model_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    n, d = X.shape
    linear_r2, linear_coef = _adjusted_r2(np.hstack([np.ones((n, 1)), X]), y)
    quad_r2, quad_coef = _adjusted_r2(quadratic_design(X), y)
    square_coef = quad_coef[1 + d : 1 + 2 * d]
    return [linear_r2, quad_r2, _abs_ratio(square_coef), _abs_ratio(linear_coef[1:])]


# dispersion --------------------------------------------------------------


def dispersion_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    order = np.argsort(y, kind="stable")
    mean_all = distances[np.triu_indices(len(y), k=1)].mean()
    values = []
    for q in DISPERSION_QUANTILES:
        n_best = max(2, int(np.ceil(q * len(y))))
        best = order[:n_best]
        values.append(float(pdist(X[best]).mean() / mean_all))
    return values


# nearest-better clustering -----------------------------------------------


def nearest_better_distances(y: np.ndarray, distances: np.ndarray):
    """Nearest-neighbor and nearest-better distances of every point

    Points without a strictly better point get NaN as nearest-better
    distance.
    """
    full = distances.copy()
    np.fill_diagonal(full, np.inf)
    nearest = full.min(axis=1)
    better = np.where(y[None, :] < y[:, None], full, np.inf)
    nearest_better = better.min(axis=1)
    nearest_better[~np.isfinite(nearest_better)] = np.nan
    return nearest, nearest_better


def nbc_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    nearest, nearest_better = nearest_better_distances(y, distances)
    mask = np.isfinite(nearest_better)
    nn, nb = nearest[mask], nearest_better[mask]
    if nn.size < 2:
        return [float("nan")] * 3
    sd_nn = nn.std()
    ratio_sd = float(nb.std() / sd_nn) if sd_nn > 0 else float("nan")
    if nb.std() == 0 or sd_nn == 0:
        correlation = float("nan")
    else:
        correlation = float(np.corrcoef(nn, nb)[0, 1])
    return [float(nb.mean() / nn.mean()), ratio_sd, correlation]


# principal components ----------------------------------------------------


def _explained_shares(data: np.ndarray) -> np.ndarray:
    sd = data.std(axis=0)
    sd[sd == 0] = 1.0
    standardized = (data - data.mean(axis=0)) / sd
    eigenvalues = np.linalg.eigvalsh(np.atleast_2d(np.cov(standardized, rowvar=False)))[::-1]
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    return eigenvalues / eigenvalues.sum()


def _components_for_share(shares: np.ndarray) -> int:
    return int(np.searchsorted(np.cumsum(shares), PCA_VARIANCE_SHARE - 1e-12) + 1)


def pca_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    shares_x = _explained_shares(X)
    shares_xy = _explained_shares(np.hstack([X, y[:, None]]))
    return [
        _components_for_share(shares_x) / X.shape[1],
        _components_for_share(shares_xy) / (X.shape[1] + 1),
        float(shares_xy[0]),
    ]


# information content -----------------------------------------------------


def nearest_neighbor_tour(distances: np.ndarray) -> np.ndarray:
    """Greedy nearest-neighbor tour through all points, starting at row 0"""
    n = distances.shape[0]
    visited = np.zeros(n, dtype=bool)
    tour = np.empty(n, dtype=int)
    current = 0
    for step in range(n):
        tour[step] = current
        visited[current] = True
        if step == n - 1:
            break
        row = np.where(visited, np.inf, distances[current])
        current = int(np.argmin(row))
    return tour


def _symbols(diffs: np.ndarray, epsilon: float) -> np.ndarray:
    return np.where(diffs > epsilon, 1, np.where(diffs < -epsilon, -1, 0))


def information_content(symbols: np.ndarray) -> float:
    """Entropy (base 6) of consecutive unequal symbol pairs"""
    if symbols.size < 2:
        return 0.0
    pairs = 3 * (symbols[:-1] + 1) + (symbols[1:] + 1)
    unequal = symbols[:-1] != symbols[1:]
    counts = np.bincount(pairs[unequal], minlength=9)
    probabilities = counts[counts > 0] / (symbols.size - 1)
    return float(-np.sum(probabilities * np.log(probabilities) / np.log(6)))


def partial_information(symbols: np.ndarray) -> float:
    """Share of the sequence left after dropping zeros and collapsing repeats"""
    nonzero = symbols[symbols != 0]
    if nonzero.size == 0:
        return 0.0
    collapsed = 1 + int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))
    return collapsed / symbols.size


def information_content_features(X: np.ndarray, y: np.ndarray, distances: np.ndarray) -> List[float]:
    tour = nearest_neighbor_tour(distances)
    diffs = np.diff(y[tour])
    largest = float(np.max(np.abs(diffs)))
    upper = max(largest, IC_EPSILON_MIN * 10)
    grid = np.logspace(np.log10(IC_EPSILON_MIN), np.log10(upper), IC_GRID_POINTS)
    entropies = np.array([information_content(_symbols(diffs, eps)) for eps in grid])
    settled = np.nonzero(entropies < IC_SETTLING_THRESHOLD)[0]
    epsilon_s = float(np.log10(grid[settled[0]])) if settled.size else float(np.log10(upper))
    return [float(entropies.max()), epsilon_s, partial_information(_symbols(diffs, 0.0))]


FEATURE_SETS: Dict[str, FeatureSet] = OrderedDict(
    (fs.name, fs)
    for fs in [
        FeatureSet(
            "y_distribution",
            ["y_dist.skewness", "y_dist.kurtosis", "y_dist.number_of_peaks"],
            y_distribution_features,
        ),
        FeatureSet(
            "level_set",
            [f"level.mmce_{kind}_{_pct(q)}" for kind in ("lda", "qda") for q in LEVEL_SET_QUANTILES],
            level_set_features,
        ),
        FeatureSet(
            "meta_model",
            ["meta.lin_adj_r2", "meta.quad_adj_r2", "meta.quad_coef_ratio", "meta.lin_coef_ratio"],
            meta_model_features,
        ),
        FeatureSet(
            "dispersion",
            [f"disp.ratio_mean_{_pct(q)}" for q in DISPERSION_QUANTILES],
            dispersion_features,
        ),
        FeatureSet(
            "nbc",
            ["nbc.nb_nn_ratio", "nbc.sd_ratio", "nbc.nn_nb_corr"],
            nbc_features,
        ),
        FeatureSet(
            "pca",
            ["pca.expl_var_x", "pca.expl_var_xy", "pca.pc1_xy"],
            pca_features,
        ),
        FeatureSet(
            "ic",
            ["ic.h_max", "ic.eps_s", "ic.m0"],
            information_content_features,
        ),
    ]
)

DEFAULT_FEATURE_SETS: List[str] = list(FEATURE_SETS)


def feature_names(feature_sets: Optional[Sequence[str]] = None) -> List[str]:
    """Ordered feature names of the selected sets (all sets when None)"""
    names: List[str] = []
    for set_name in feature_sets or DEFAULT_FEATURE_SETS:
        if set_name not in FEATURE_SETS:
            raise KeyError(f"Unknown feature set: {set_name!r}")
        names.extend(FEATURE_SETS[set_name].feature_names)
    return names


def compute_features(
    sample: DesignSample, feature_sets: Optional[Sequence[str]] = None
) -> FeatureVector:
    """Compute the selected ELA features of a sample

    Args:
        sample: Design sample with N >= 10 D rows
        feature_sets: Feature set names in FEATURE_SETS order, all when None

    Returns:
        Ordered mapping feature name -> value; values may be non-finite
        (imputation happens at the distribution level)

    Raises:
        DegenerateSample: If y is constant or non-finite, or N < 10 D
    """
    X = np.asarray(sample.X, dtype=float)
    y = np.asarray(sample.y, dtype=float).reshape(-1)
    n, d = X.shape
    if n < MIN_POINTS_PER_DIM * d:
        raise DegenerateSample(f"Need at least {MIN_POINTS_PER_DIM * d} points, got {n}")
    if not np.all(np.isfinite(y)):
        raise DegenerateSample("Objective values contain NaN or Inf")
    if np.ptp(y) < CONSTANT_Y_TOLERANCE:
        raise DegenerateSample("Objective values are constant")

    selected = list(feature_sets or DEFAULT_FEATURE_SETS)
    feature_names(selected)
    distances = squareform(pdist(X))
    features: FeatureVector = OrderedDict()
    for set_name in FEATURE_SETS:
        if set_name not in selected:
            continue
        feature_set = FEATURE_SETS[set_name]
        try:
            with np.errstate(all="ignore"):
                values = feature_set.compute(X, y, distances)
        except (np.linalg.LinAlgError, ValueError) as e:
            logger.debug("Feature set %s failed: %s", set_name, e)
            values = [float("nan")] * len(feature_set.feature_names)
        for name, value in zip(feature_set.feature_names, values):
            features[name] = float(value)
    return features
