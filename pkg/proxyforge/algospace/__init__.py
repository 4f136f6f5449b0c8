"""Modular metaheuristic space: configurations, execution and baselines"""

from .baselines import baseline_configs, de_baseline, lshade_baseline
from .config import (
    ADAPTIVE,
    AUTO,
    AlgorithmConfig,
    BoundHandling,
    Crossover,
    Family,
    Mutation,
    Restart,
    auto_population,
    json_schema,
)
from .engine import ModularDE, RandomSearch, run
from .mutation import LARGE, SMALL, active_fields, mutate_config, repair_config

__all__ = [
    "ADAPTIVE",
    "AUTO",
    "AlgorithmConfig",
    "BoundHandling",
    "Crossover",
    "Family",
    "LARGE",
    "ModularDE",
    "Mutation",
    "RandomSearch",
    "Restart",
    "SMALL",
    "active_fields",
    "auto_population",
    "baseline_configs",
    "de_baseline",
    "json_schema",
    "lshade_baseline",
    "mutate_config",
    "repair_config",
    "run",
]
