"""Problem abstraction

A ProblemSpec describes a bounded black-box objective. The wrapped
function is batch-oriented (N×D matrix in, N values out) and returns the
problem's natural value; `values` applies the minimization convention.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from .errors import DimensionMismatch

BatchFunction = Callable[[np.ndarray], np.ndarray]

DEFAULT_CLIP_RANGE: Tuple[float, float] = (1e-8, 1e2)


@dataclass(frozen=True)
class ProblemSpec:
    """A bounded black-box objective

    Attributes:
        name: Identifier (registry name, e.g. "mini-bragg")
        dim: Dimension D
        lower_bounds: Lower box bounds, shape (D,)
        upper_bounds: Upper box bounds, shape (D,)
        function: Batch objective returning natural values, shape (N,)
        maximize: True when the natural value is to be maximized; the
            machinery then minimizes 1 - value
        known_optimum: Optimum of the minimized value, when known
        clip_range: AOCC clip bounds (lo, hi) for this problem
        metadata: Free-form descriptive metadata (materials, sources)
    """

    name: str
    dim: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    function: BatchFunction
    maximize: bool = False
    known_optimum: Optional[float] = None
    clip_range: Tuple[float, float] = DEFAULT_CLIP_RANGE
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower_bounds, dtype=float).reshape(-1)
        upper = np.asarray(self.upper_bounds, dtype=float).reshape(-1)
        if self.dim < 1:
            raise ValueError(f"Problem {self.name!r}: dim must be >= 1, got {self.dim}")
        if lower.shape != (self.dim,) or upper.shape != (self.dim,):
            raise DimensionMismatch(
                f"Problem {self.name!r}: bounds must have length {self.dim}"
            )
        if not np.all(lower < upper):
            raise ValueError(f"Problem {self.name!r}: lower bounds must be below upper bounds")
        object.__setattr__(self, "lower_bounds", lower)
        object.__setattr__(self, "upper_bounds", upper)

    def clip(self, x: np.ndarray) -> np.ndarray:
        """Clip points to the box"""
        return np.clip(x, self.lower_bounds, self.upper_bounds)

    def values(self, X: np.ndarray) -> np.ndarray:
        """Evaluate a batch under the minimization convention

        Args:
            X: Points, shape (N, D)

        Returns:
            Minimized objective values, shape (N,)
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionMismatch(
                f"Problem {self.name!r} expects dimension {self.dim}, got {X.shape[1]}"
            )
        natural = np.asarray(self.function(X), dtype=float).reshape(-1)
        return 1.0 - natural if self.maximize else natural

    def value(self, x: np.ndarray) -> float:
        """Evaluate a single point under the minimization convention"""
        return float(self.values(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def describe(self) -> Dict[str, Any]:
        """Metadata for the CLI and configuration layer"""
        return {
            "name": self.name,
            "dim": self.dim,
            "lower_bounds": self.lower_bounds.tolist(),
            "upper_bounds": self.upper_bounds.tolist(),
            "maximize": self.maximize,
            "known_optimum": self.known_optimum,
        }
