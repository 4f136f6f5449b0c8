"""Modular metaheuristic configuration space

An AlgorithmConfig is one point in the space searched by the designer:
random search, or a differential evolution variant assembled from
mutation, crossover, parameter-adaptation, archive, population-reduction,
restart and bound-handling modules.
"""

import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Any, Dict, Optional, Union

from ..core.errors import InvalidConfig

ADAPTIVE = "adaptive"
AUTO = "auto"

MIN_POPULATION = 4
MAX_POPULATION = 500
P_BEST_CHOICES = (0.05, 0.1, 0.2)
LSHADE_P_BEST = 0.11
DEFAULT_MEMORY_SIZE = 6


class Family(Enum):
    """Algorithm families"""

    RS = "RS"
    DE = "DE"
    LSHADE = "LSHADE"


class Mutation(Enum):
    """DE mutation strategies"""

    RAND1 = "rand1"
    BEST1 = "best1"
    CURRENT_TO_PBEST = "current-to-pbest"


class Crossover(Enum):
    BINOMIAL = "binomial"
    EXPONENTIAL = "exponential"


class Restart(Enum):
    NONE = "none"
    ON_STAGNATION = "on-stagnation"


class BoundHandling(Enum):
    CLIP = "clip"
    REFLECT = "reflect"


_ENUM_FIELDS = {
    "family": Family,
    "mutation": Mutation,
    "crossover": Crossover,
    "restart": Restart,
    "bound_handling": BoundHandling,
}


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass(frozen=True)
class AlgorithmConfig:
    """A configuration of the modular metaheuristic

    Attributes:
        family: RS, DE or LSHADE
        population_size: Initial population size or "auto"
        mutation: Mutation strategy
        p_best: Greedy fraction of current-to-pbest
        crossover: Crossover operator
        F: Scale factor in (0, 2] or "adaptive"
        CR: Crossover rate in [0, 1] or "adaptive"
        archive: Keep replaced parents as difference-vector donors
        lpsr: Linear population size reduction down to 4
        restart: Restart policy
        restart_window: Stagnation window in evaluations, 10 x population when None
        restart_tol: Relative improvement below which the run stagnates
        bound_handling: Repair of out-of-box trial vectors
        memory_size: Success-history memory size for adaptive F/CR
    """

    family: Family = Family.DE
    population_size: Union[int, str] = AUTO
    mutation: Mutation = Mutation.RAND1
    p_best: float = 0.1
    crossover: Crossover = Crossover.BINOMIAL
    F: Union[float, str] = 0.5
    CR: Union[float, str] = 0.9
    archive: bool = False
    lpsr: bool = False
    restart: Restart = Restart.NONE
    restart_window: Optional[int] = None
    restart_tol: float = 1e-12
    bound_handling: BoundHandling = BoundHandling.CLIP
    memory_size: int = DEFAULT_MEMORY_SIZE

    @property
    def label(self) -> str:
        if self.family is Family.RS:
            return "RS"
        if self.family is Family.LSHADE:
            return "LSHADE"
        return f"DE/{self.mutation.value}/{self.crossover.value}"

    @property
    def adaptive_f(self) -> bool:
        return self.F == ADAPTIVE

    @property
    def adaptive_cr(self) -> bool:
        return self.CR == ADAPTIVE

    def normalized(self) -> "AlgorithmConfig":
        """Apply the LSHADE forcing rules"""
        if self.family is Family.LSHADE:
            return replace(
                self,
                mutation=Mutation.CURRENT_TO_PBEST,
                p_best=LSHADE_P_BEST,
                F=ADAPTIVE,
                CR=ADAPTIVE,
                archive=True,
                lpsr=True,
            )
        return self

    def validate(self) -> "AlgorithmConfig":
        """Check the invariants of the space

        Returns:
            self, for chaining

        Raises:
            InvalidConfig: On any violation
        """
        for name, enum_type in _ENUM_FIELDS.items():
            if not isinstance(getattr(self, name), enum_type):
                raise InvalidConfig(f"{name} must be a {enum_type.__name__}")
        if self.family is Family.RS:
            return self
        if self.population_size != AUTO:
            if not isinstance(self.population_size, int) or isinstance(self.population_size, bool):
                raise InvalidConfig(f"population_size must be an integer or 'auto', got {self.population_size!r}")
            if not MIN_POPULATION <= self.population_size <= MAX_POPULATION:
                raise InvalidConfig(f"population_size must be in [{MIN_POPULATION}, {MAX_POPULATION}]")
        if self.F != ADAPTIVE and not (_is_real(self.F) and 0.0 < self.F <= 2.0):
            raise InvalidConfig(f"F must be in (0, 2] or 'adaptive', got {self.F!r}")
        if self.CR != ADAPTIVE and not (_is_real(self.CR) and 0.0 <= self.CR <= 1.0):
            raise InvalidConfig(f"CR must be in [0, 1] or 'adaptive', got {self.CR!r}")
        if self.memory_size < 1:
            raise InvalidConfig("memory_size must be >= 1")
        if self.restart_window is not None and self.restart_window < 1:
            raise InvalidConfig("restart_window must be >= 1")
        if self.restart_tol < 0:
            raise InvalidConfig("restart_tol must be >= 0")
        if self.family is Family.LSHADE:
            forced = self.normalized()
            if forced != self:
                raise InvalidConfig("LSHADE requires current-to-pbest, adaptive F/CR, archive and lpsr")
        elif self.mutation is Mutation.CURRENT_TO_PBEST and self.p_best not in P_BEST_CHOICES:
            raise InvalidConfig(f"p_best must be one of {P_BEST_CHOICES}, got {self.p_best}")
        return self

    def resolve_population(self, dim: int) -> int:
        """Initial population size for dimension dim"""
        if self.population_size == AUTO:
            return auto_population(dim)
        return int(self.population_size)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            result[f.name] = value.value if isinstance(value, Enum) else value
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AlgorithmConfig":
        """Build and validate a config from its JSON form

        Missing fields take defaults. LSHADE forcing is applied.

        Raises:
            InvalidConfig: On unknown fields or invalid values
        """
        if not isinstance(data, dict):
            raise InvalidConfig("Configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfig(f"Unknown configuration fields: {unknown}")
        kwargs: Dict[str, Any] = {}
        for name, value in data.items():
            if name in _ENUM_FIELDS:
                try:
                    value = _ENUM_FIELDS[name](value)
                except ValueError:
                    raise InvalidConfig(f"Invalid {name}: {value!r}")
            kwargs[name] = value
        if isinstance(kwargs.get("population_size"), float) and kwargs["population_size"].is_integer():
            kwargs["population_size"] = int(kwargs["population_size"])
        try:
            config = cls(**kwargs)
        except TypeError as e:
            raise InvalidConfig(str(e))
        return config.normalized().validate()


def auto_population(dim: int) -> int:
    """4 + floor(3 ln D), at least 5"""
    return max(5, 4 + int(math.floor(3.0 * math.log(max(dim, 1)))))


def _number_or_adaptive(lo: float, hi: float) -> Dict[str, Any]:
    return {"oneOf": [{"type": "number", "minimum": lo, "maximum": hi}, {"const": ADAPTIVE}]}


def json_schema() -> Dict[str, Any]:
    """JSON schema of the AlgorithmConfig wire form"""
    return {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "family": {"enum": [f.value for f in Family]},
            "population_size": {
                "oneOf": [{"type": "integer", "minimum": MIN_POPULATION, "maximum": MAX_POPULATION}, {"const": AUTO}]
            },
            "mutation": {"enum": [m.value for m in Mutation]},
            "p_best": {"enum": sorted(P_BEST_CHOICES + (LSHADE_P_BEST,))},
            "crossover": {"enum": [c.value for c in Crossover]},
            "F": _number_or_adaptive(0.0, 2.0),
            "CR": _number_or_adaptive(0.0, 1.0),
            "archive": {"type": "boolean"},
            "lpsr": {"type": "boolean"},
            "restart": {"enum": [r.value for r in Restart]},
            "restart_window": {"type": ["integer", "null"], "minimum": 1},
            "restart_tol": {"type": "number", "minimum": 0},
            "bound_handling": {"enum": [b.value for b in BoundHandling]},
            "memory_size": {"type": "integer", "minimum": 1},
        },
        "required": ["family"],
    }
