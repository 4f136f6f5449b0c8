"""Problem registry addressable by name strings

Names: `mini-bragg`, `bragg`, `ellipsometry`, `photovoltaic` and
`synthetic:<function_id>:<dim>`.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

from ..core.errors import UnknownFunctionId, UnknownProblem
from ..core.problem import ProblemSpec
from .photonics import make_bragg_problem, make_ellipsometry_problem, make_photovoltaic_problem
from .synthetic import FUNCTION_IDS, synthetic

SYNTHETIC_PREFIX = "synthetic"


@dataclass
class ProblemEntry:
    """Metadata of a registered problem

    Attributes:
        name: Registry name
        factory: Builds the ProblemSpec from a seed
        description: One-line description
    """

    name: str
    factory: Callable[[int], ProblemSpec]
    description: str


class ProblemRegistry:
    """Registry of target problems and the synthetic suite"""

    def __init__(self) -> None:
        self._entries: Dict[str, ProblemEntry] = {}
        self._initialize_problems()

    def _initialize_problems(self) -> None:
        """Register the photonic instances"""
        self.register("mini-bragg", lambda seed: make_bragg_problem(10), "10-layer Bragg mirror at 600 nm")
        self.register("bragg", lambda seed: make_bragg_problem(20), "20-layer Bragg mirror at 600 nm")
        self.register("ellipsometry", lambda seed: make_ellipsometry_problem(), "Single-layer spectrum inversion")
        self.register("photovoltaic", lambda seed: make_photovoltaic_problem(), "Anti-reflection coating over an absorber")

    def register(self, name: str, factory: Callable[[int], ProblemSpec], description: str = "") -> None:
        self._entries[name] = ProblemEntry(name, factory, description)

    def names(self) -> List[str]:
        """Registered names, synthetic suite excluded"""
        return sorted(self._entries)

    def is_registered(self, name: str) -> bool:
        if not name.startswith(SYNTHETIC_PREFIX + ":"):
            return name in self._entries
        try:
            self._parse_synthetic(name)
        except UnknownProblem:
            return False
        return True

    def _parse_synthetic(self, name: str):
        parts = name.split(":")
        if len(parts) != 3:
            raise UnknownProblem(f"Synthetic names look like synthetic:<id>:<dim>, got {name!r}")
        _, function_id, dim_text = parts
        if function_id not in FUNCTION_IDS:
            raise UnknownFunctionId(f"Unknown synthetic function: {function_id!r}")
        try:
            dim = int(dim_text)
        except ValueError:
            raise UnknownProblem(f"Invalid synthetic dimension in {name!r}")
        if dim < 1:
            raise UnknownProblem(f"Invalid synthetic dimension in {name!r}")
        return function_id, dim

    def get(self, name: str, seed: int = 0) -> ProblemSpec:
        """Build a problem by name

        Args:
            name: Registry name
            seed: Seed for seeded instances (synthetic shifts)

        Returns:
            ProblemSpec

        Raises:
            UnknownProblem: If the name is not registered
        """
        if name.startswith(SYNTHETIC_PREFIX + ":"):
            function_id, dim = self._parse_synthetic(name)
            return synthetic(function_id, dim, seed)
        if name not in self._entries:
            raise UnknownProblem(f"Unknown problem: {name!r}")
        return self._entries[name].factory(seed)

    def synthetic_pool(self, dim: int, seed: int = 0) -> List[ProblemSpec]:
        """Every synthetic function at dimension dim"""
        return [synthetic(function_id, dim, seed) for function_id in FUNCTION_IDS]

    def describe(self, name: str, seed: int = 0) -> Dict[str, object]:
        problem = self.get(name, seed)
        info = problem.describe()
        entry = self._entries.get(name)
        if entry is not None:
            info["description"] = entry.description
        return info


def get_problem(name: str, seed: int = 0) -> ProblemSpec:
    """Build a problem from a fresh registry"""
    return ProblemRegistry().get(name, seed)
