"""Landscape-guided evolution of proxy functions

A generational GP: tournament selection, one-point crossover, subtree
mutation and one elite. Fitness is the landscape distance between the
tree's feature distribution on the fixed design X and the target's.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import NoValidCandidate
from ..core.rng import RandomStream
from ..ela.distribution import DEFAULT_N_ELA, DEFAULT_RATE_ELA, FeatureDistribution
from .fitness import PENALTY, ProxyCandidate, evaluate_candidate
from .operators import DEFAULT_CONSTANT_RANGE, init_half_and_half, one_point_crossover, subtree_mutation
from .primitives import PrimitiveRegistry
from .types import ExpressionTree

logger = logging.getLogger(__name__)

# stream ids below the run stream
_INIT_STREAM = 0
_VARIATION_STREAM = 1
_FITNESS_STREAM = 2


@dataclass
class GPParams:
    """Hyperparameters of a GP run

    Attributes:
        n_pop: Population size
        n_gen: Number of generations
        p_c: Crossover probability
        p_m: Mutation probability
        tournament_k: Tournament size
        min_depth: Minimum tree depth
        max_depth: Maximum tree depth
        k: Number of proxies extracted
        elitism: Individuals copied unchanged each generation
        use_rand: Include the `rand` terminal
        constant_range: Range of `a` constants
        workers: Threads for fitness evaluation
    """

    n_pop: int = 50
    n_gen: int = 50
    p_c: float = 0.5
    p_m: float = 0.1
    tournament_k: int = 3
    min_depth: int = 3
    max_depth: int = 12
    k: int = 3
    elitism: int = 1
    use_rand: bool = True
    constant_range: Tuple[float, float] = DEFAULT_CONSTANT_RANGE
    workers: int = 1

    def validate(self) -> None:
        if self.n_pop < 1 or self.n_gen < 0 or self.tournament_k < 1 or self.k < 1:
            raise ValueError("GP sizes must be positive")
        if not (0.0 <= self.p_c <= 1.0 and 0.0 <= self.p_m <= 1.0):
            raise ValueError("GP probabilities must lie in [0, 1]")
        if self.min_depth < 3 or self.max_depth < self.min_depth:
            raise ValueError("Need 3 <= min_depth <= max_depth")


@dataclass
class EvolutionResult:
    """Outcome of a GP run

    Attributes:
        population: Final population, sorted by fitness
        archive: Every distinct evaluated tree, sorted by fitness
        history: Best archive fitness after initialization and each generation
        initial_fitness: Fitness of the initial population
    """

    population: List[ProxyCandidate]
    archive: List[ProxyCandidate]
    history: List[float] = field(default_factory=list)
    initial_fitness: List[float] = field(default_factory=list)

    @property
    def best(self) -> ProxyCandidate:
        return self.archive[0]

    @property
    def ranked(self) -> List[ProxyCandidate]:
        return self.archive


def _rank(candidates: Sequence[ProxyCandidate]) -> List[ProxyCandidate]:
    return sorted(candidates, key=lambda c: (c.fitness, c.key))


def tournament(population: Sequence[ProxyCandidate], k: int, rng: RandomStream) -> ProxyCandidate:
    """Best of k uniformly drawn individuals; earlier index wins ties"""
    picks = sorted(int(i) for i in rng.draw_integers(0, len(population), size=k))
    return min((population[i] for i in picks), key=lambda c: c.fitness)


def top_k(candidates: Sequence[ProxyCandidate], k: int) -> List[ProxyCandidate]:
    """The k best valid candidates with pairwise distinct trees"""
    selected: List[ProxyCandidate] = []
    seen = set()
    for candidate in _rank(candidates):
        if not candidate.valid or candidate.key in seen:
            continue
        seen.add(candidate.key)
        selected.append(candidate)
        if len(selected) == k:
            break
    return selected


class ProxyEvolver:
    """Runs the generational loop against one target distribution"""

    def __init__(
        self,
        target: FeatureDistribution,
        X: np.ndarray,
        params: GPParams,
        rng: RandomStream,
        rate_ela: float = DEFAULT_RATE_ELA,
        n_ela: int = DEFAULT_N_ELA,
        feature_sets: Optional[Sequence[str]] = None,
    ) -> None:
        params.validate()
        self.target = target
        self.X = np.asarray(X, dtype=float)
        self.params = params
        self.rng = rng
        self.rate_ela = rate_ela
        self.n_ela = n_ela
        self.feature_sets = feature_sets
        self.registry = PrimitiveRegistry(use_rand=params.use_rand)
        self._cache: Dict[str, ProxyCandidate] = {}
        self._fitness_stream = rng.child(_FITNESS_STREAM)

    def _evaluate_one(self, tree: ExpressionTree) -> ProxyCandidate:
        return evaluate_candidate(
            tree, self.X, self.target, self.rate_ela, self.n_ela, self._fitness_stream, self.feature_sets
        )

    def evaluate(self, trees: Sequence[ExpressionTree]) -> List[ProxyCandidate]:
        """Fitness of every tree; identical trees are evaluated once"""
        keys = [tree.key() for tree in trees]
        pending: Dict[str, ExpressionTree] = {}
        for key, tree in zip(keys, trees):
            if key not in self._cache and key not in pending:
                pending[key] = tree
        if self.params.workers > 1 and len(pending) > 1:
            with ThreadPoolExecutor(max_workers=self.params.workers) as pool:
                results = list(pool.map(self._evaluate_one, pending.values()))
        else:
            results = [self._evaluate_one(tree) for tree in pending.values()]
        for key, candidate in zip(pending, results):
            self._cache[key] = candidate
        return [ProxyCandidate(tree, self._cache[key].fitness, self._cache[key].valid) for key, tree in zip(keys, trees)]

    def _offspring(self, population: List[ProxyCandidate], rng: RandomStream) -> List[ExpressionTree]:
        params = self.params
        ranked = _rank(population)
        children = [candidate.tree.copy() for candidate in ranked[: params.elitism]]
        while len(children) < params.n_pop:
            parent_a = tournament(population, params.tournament_k, rng).tree
            parent_b = tournament(population, params.tournament_k, rng).tree
            if rng.coin(params.p_c):
                child_a, child_b = one_point_crossover(
                    parent_a, parent_b, rng, params.min_depth, params.max_depth, self.registry
                )
            else:
                child_a, child_b = parent_a.copy(), parent_b.copy()
            for child in (child_a, child_b):
                if rng.coin(params.p_m):
                    child = subtree_mutation(
                        child, rng, params.min_depth, params.max_depth, self.registry, params.constant_range
                    )
                if len(children) < params.n_pop:
                    children.append(child)
        return children

    def run(self) -> EvolutionResult:
        params = self.params
        trees = init_half_and_half(
            params.n_pop,
            params.min_depth,
            params.max_depth,
            self.rng.child(_INIT_STREAM),
            self.registry,
            params.constant_range,
        )
        population = self.evaluate(trees)
        initial_fitness = [c.fitness for c in population]
        history = [min(c.fitness for c in self._cache.values())]
        logger.info("GP init: best fitness %.6g", history[-1])

        for generation in range(params.n_gen):
            rng = self.rng.child(_VARIATION_STREAM, generation)
            population = self.evaluate(self._offspring(population, rng))
            history.append(min(c.fitness for c in self._cache.values()))
            logger.info("GP generation %d: best fitness %.6g", generation + 1, history[-1])

        archive = _rank(self._cache.values())
        if not any(c.valid for c in archive):
            raise NoValidCandidate("Every evaluated tree was penalized")
        return EvolutionResult(_rank(population), archive, history, initial_fitness)


def evolve(
    target: FeatureDistribution,
    X: np.ndarray,
    params: Optional[GPParams] = None,
    rng: Optional[RandomStream] = None,
    rate_ela: float = DEFAULT_RATE_ELA,
    n_ela: int = DEFAULT_N_ELA,
    feature_sets: Optional[Sequence[str]] = None,
) -> EvolutionResult:
    """Evolve trees whose landscapes resemble the target's

    Args:
        target: Target feature distribution, pruned
        X: Fixed design points of the target, shape (N, D)
        params: GP hyperparameters
        rng: Random stream of the run
        rate_ela: Subsample rate of the proxy distributions
        n_ela: Number of subsamples
        feature_sets: Feature sets to compute

    Returns:
        EvolutionResult whose archive is sorted ascending by fitness

    Raises:
        NoValidCandidate: If every individual was penalized
    """
    evolver = ProxyEvolver(
        target, X, params or GPParams(), rng or RandomStream(0), rate_ela, n_ela, feature_sets
    )
    return evolver.run()
