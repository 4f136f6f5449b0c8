"""Proxy selection and AOCC scoring of candidate configurations"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..algospace.config import AlgorithmConfig
from ..algospace.engine import run
from ..core.budget import BudgetedEvaluator, BudgetLedger, EvalKind, Phase
from ..core.problem import ProblemSpec
from ..core.rng import RandomStream
from ..ela.distribution import FeatureDistribution
from ..ela.similarity import landscape_distance

logger = logging.getLogger(__name__)

DEFAULT_K = 3


def rank_by_distance(
    target_dist: FeatureDistribution, pool: Sequence[Tuple[str, FeatureDistribution]]
) -> List[Tuple[str, float]]:
    """(name, distance) pairs sorted ascending, ties by name

    Raises:
        ValueError: If pool is empty
        FeatureMismatch: If retained lists differ
    """
    if not pool:
        raise ValueError("Proxy pool is empty")
    scored = [(name, landscape_distance(target_dist, dist)) for name, dist in pool]
    return sorted(scored, key=lambda item: (item[1], item[0]))


def select_proxies(
    target_dist: FeatureDistribution, pool: Sequence[Tuple[str, FeatureDistribution]], k: int = DEFAULT_K
) -> List[str]:
    """Names of the k pool members closest to the target landscape"""
    return [name for name, _ in rank_by_distance(target_dist, pool)[:k]]


def score_candidate(
    config: AlgorithmConfig,
    proxies: Sequence[ProblemSpec],
    inner_budget: int,
    repetitions: int,
    rng: RandomStream,
    ledger: Optional[BudgetLedger] = None,
    kind: EvalKind = EvalKind.PROXY,
    workers: int = 1,
) -> float:
    """Mean AOCC of config over proxies x repetitions

    Run seeds depend only on rng and the (proxy, repetition) position, so
    every candidate scored with the same stream meets the same seeds.

    Args:
        config: Candidate
        proxies: Problems to run on
        inner_budget: Evaluations per run
        repetitions: Runs per proxy
        rng: Seed stream
        ledger: Charged in the discovery phase with the given kind
        kind: PROXY, or TARGET when the proxies are the real problem
        workers: Threads for concurrent runs

    Returns:
        Score in [0, 1]

    Raises:
        InvalidConfig: If config is invalid
        ValueError: If proxies is empty
    """
    if not proxies:
        raise ValueError("score_candidate needs at least one proxy")
    config = config.validate()
    jobs = [
        (problem, rng.child(p, r).draw_seed())
        for p, problem in enumerate(proxies)
        for r in range(repetitions)
    ]

    def one_run(job: Tuple[ProblemSpec, int]) -> float:
        problem, seed = job
        evaluator = BudgetedEvaluator(problem, inner_budget, ledger, Phase.DISCOVERY, kind)
        return run(config, evaluator, seed).aocc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(one_run, jobs))
    else:
        scores = [one_run(job) for job in jobs]
    score = float(np.mean(scores))
    logger.debug("Scored %s: %.6f", config.label, score)
    return score
