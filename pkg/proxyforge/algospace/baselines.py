"""Baseline configurations: random search, DE rand/1/bin and LSHADE"""

from collections import OrderedDict
from typing import Dict

from .config import MIN_POPULATION, AlgorithmConfig, Crossover, Family, Mutation

DE_POPULATION_FACTOR = 10
LSHADE_POPULATION_FACTOR = 18
BUDGET_GENERATIONS = 5


def capped_population(factor: int, dim: int, budget: int) -> int:
    """factor x D, capped at budget / 5 generations, at least 4"""
    return max(MIN_POPULATION, min(factor * dim, budget // BUDGET_GENERATIONS))


def de_baseline(dim: int, budget: int) -> AlgorithmConfig:
    return AlgorithmConfig(
        family=Family.DE,
        population_size=capped_population(DE_POPULATION_FACTOR, dim, budget),
        mutation=Mutation.RAND1,
        crossover=Crossover.BINOMIAL,
        F=0.5,
        CR=0.9,
    ).validate()


def lshade_baseline(dim: int, budget: int) -> AlgorithmConfig:
    return AlgorithmConfig(
        family=Family.LSHADE,
        population_size=capped_population(LSHADE_POPULATION_FACTOR, dim, budget),
    ).normalized().validate()


def baseline_configs(dim: int, budget: int) -> Dict[str, AlgorithmConfig]:
    """RS, DE and LSHADE configs for a problem of dimension dim

    Returns:
        Ordered mapping from baseline label to config
    """
    return OrderedDict(
        [
            ("RS", AlgorithmConfig(family=Family.RS)),
            ("DE", de_baseline(dim, budget)),
            ("LSHADE", lshade_baseline(dim, budget)),
        ]
    )
