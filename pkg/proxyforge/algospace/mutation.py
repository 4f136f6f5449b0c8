"""Offline perturbation of AlgorithmConfigs

Used by the designer when no language model is available, and as the
fallback when a proposer fails.
"""

from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..core.rng import RandomStream
from .config import (
    ADAPTIVE,
    AUTO,
    MAX_POPULATION,
    MIN_POPULATION,
    P_BEST_CHOICES,
    AlgorithmConfig,
    BoundHandling,
    Crossover,
    Family,
    Mutation,
    Restart,
)

SMALL = "small"
LARGE = "large"

SMALL_STEP_FACTOR = 0.2
LARGE_STEP_MAX_FIELDS = 3
SYMBOLIC_PROBABILITY = 0.3
POPULATION_DRAW_RANGE = (MIN_POPULATION, 100)
F_DRAW_RANGE = (0.1, 1.0)
F_RANGE = (0.01, 2.0)

_ENUMS = {
    "family": Family,
    "mutation": Mutation,
    "crossover": Crossover,
    "restart": Restart,
    "bound_handling": BoundHandling,
}


def active_fields(config: AlgorithmConfig) -> List[str]:
    """Fields whose change alters the behavior of config"""
    if config.family is Family.RS:
        return ["family"]
    if config.family is Family.LSHADE:
        return ["family", "population_size", "crossover", "restart", "bound_handling"]
    fields = ["family", "population_size", "mutation", "crossover", "F", "CR", "archive", "lpsr", "restart", "bound_handling"]
    if config.mutation is Mutation.CURRENT_TO_PBEST:
        fields.append("p_best")
    return fields


def _other_choice(rng: RandomStream, choices: Tuple[Any, ...], current: Any) -> Any:
    options = [c for c in choices if c != current]
    return options[int(rng.draw_integers(0, len(options)))]


def _redraw(name: str, config: AlgorithmConfig, rng: RandomStream) -> Any:
    current = getattr(config, name)
    if name in _ENUMS:
        return _other_choice(rng, tuple(_ENUMS[name]), current)
    if name == "p_best":
        return _other_choice(rng, P_BEST_CHOICES, current)
    if name in ("archive", "lpsr"):
        return not current
    if name == "population_size":
        if rng.coin(SYMBOLIC_PROBABILITY):
            return AUTO
        return int(rng.draw_integers(POPULATION_DRAW_RANGE[0], POPULATION_DRAW_RANGE[1] + 1))
    if name == "F":
        return ADAPTIVE if rng.coin(SYMBOLIC_PROBABILITY) else round(float(rng.draw_uniform(*F_DRAW_RANGE)), 4)
    if name == "CR":
        return ADAPTIVE if rng.coin(SYMBOLIC_PROBABILITY) else round(float(rng.draw_uniform(0.0, 1.0)), 4)
    raise KeyError(name)


def _scale(name: str, value: Any, rng: RandomStream) -> Any:
    factor = 1.0 + float(rng.draw_uniform(-SMALL_STEP_FACTOR, SMALL_STEP_FACTOR))
    if name == "population_size":
        return int(min(MAX_POPULATION, max(MIN_POPULATION, round(value * factor))))
    if name == "F":
        return round(min(F_RANGE[1], max(F_RANGE[0], value * factor)), 4)
    return round(min(1.0, max(0.0, value * factor)), 4)


def _is_numeric(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _small_step(name: str, config: AlgorithmConfig, rng: RandomStream) -> Any:
    value = getattr(config, name)
    if name in ("population_size", "F", "CR") and _is_numeric(value):
        return _scale(name, value, rng)
    return _redraw(name, config, rng)


def repair_config(config: AlgorithmConfig) -> AlgorithmConfig:
    """Map a perturbed config back into the valid space"""
    config = config.normalized()
    if config.family is Family.DE and config.p_best not in P_BEST_CHOICES:
        config = replace(config, p_best=0.1)
    if _is_numeric(config.population_size):
        size = int(min(MAX_POPULATION, max(MIN_POPULATION, config.population_size)))
        config = replace(config, population_size=size)
    return config.validate()


_STEPS: Dict[str, Callable[[str, AlgorithmConfig, RandomStream], Any]] = {
    SMALL: _small_step,
    LARGE: _redraw,
}


def mutate_config(
    config: AlgorithmConfig, rng: RandomStream, step: str = SMALL, field: Optional[str] = None
) -> AlgorithmConfig:
    """Perturb a configuration

    A small step changes one field: numeric F, CR and population size by
    up to +-20%, anything else re-drawn. A large step re-draws one to three
    fields.

    Args:
        config: Valid configuration
        rng: Random stream
        step: "small" or "large"
        field: Field to change; drawn among the active fields when None

    Returns:
        A configuration satisfying every invariant

    Raises:
        ValueError: On an unknown step
    """
    if step not in _STEPS:
        raise ValueError(f"Unknown step {step!r}, expected one of {sorted(_STEPS)}")
    candidates = active_fields(config)
    if field is not None:
        names = [field]
    elif step == SMALL:
        names = [candidates[int(rng.draw_integers(0, len(candidates)))]]
    else:
        count = int(rng.draw_integers(1, min(LARGE_STEP_MAX_FIELDS, len(candidates)) + 1))
        order = rng.generator.permutation(len(candidates))[:count]
        names = [candidates[int(i)] for i in sorted(order)]
    changes = {name: _STEPS[step](name, config, rng) for name in names}
    return repair_config(replace(config, **changes))
