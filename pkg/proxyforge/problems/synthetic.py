"""Shifted synthetic benchmark functions on [-5, 5]^D

A reduced BBOB-style suite. Every function is written in terms of
z = x - shift and reaches its optimum 0 at x = shift.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from ..core.errors import UnknownFunctionId
from ..core.problem import ProblemSpec
from ..core.rng import RandomStream

SYNTHETIC_BOUNDS = (-5.0, 5.0)

_WEIERSTRASS_A = 0.5
_WEIERSTRASS_B = 3.0
_WEIERSTRASS_K = np.arange(12)


def sphere(z: np.ndarray) -> np.ndarray:
    return np.sum(z**2, axis=1)


def rastrigin(z: np.ndarray) -> np.ndarray:
    return 10.0 * z.shape[1] + np.sum(z**2 - 10.0 * np.cos(2.0 * np.pi * z), axis=1)


def rosenbrock(z: np.ndarray) -> np.ndarray:
    if z.shape[1] < 2:
        return np.sum(z**2, axis=1)
    u = z + 1.0
    return np.sum(100.0 * (u[:, 1:] - u[:, :-1] ** 2) ** 2 + (1.0 - u[:, :-1]) ** 2, axis=1)


def schwefel(z: np.ndarray) -> np.ndarray:
    """Schwefel 1.2: sum of squared prefix sums"""
    return np.sum(np.cumsum(z, axis=1) ** 2, axis=1)


def griewank(z: np.ndarray) -> np.ndarray:
    i = np.arange(1, z.shape[1] + 1)
    return 1.0 + np.sum(z**2, axis=1) / 4000.0 - np.prod(np.cos(z / np.sqrt(i)), axis=1)


def ackley(z: np.ndarray) -> np.ndarray:
    d = z.shape[1]
    first = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(z**2, axis=1) / d))
    second = -np.exp(np.sum(np.cos(2.0 * np.pi * z), axis=1) / d)
    return first + second + 20.0 + np.e


def weierstrass_like(z: np.ndarray) -> np.ndarray:
    a_k = _WEIERSTRASS_A**_WEIERSTRASS_K
    b_k = _WEIERSTRASS_B**_WEIERSTRASS_K
    terms = a_k * np.cos(2.0 * np.pi * b_k * (z[..., None] + 0.5))
    offset = z.shape[1] * np.sum(a_k * np.cos(np.pi * b_k))
    return np.sum(terms, axis=(1, 2)) - offset


def slope_coefficients(signs: np.ndarray) -> np.ndarray:
    d = signs.size
    exponents = np.arange(d) / (d - 1) if d > 1 else np.ones(1)
    return signs * 10.0**exponents


def linear_slope_factory(signs: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Linear slope with its optimum in the corner 5 * signs"""
    s = slope_coefficients(signs)
    corner = 5.0 * signs

    def linear_slope(X: np.ndarray) -> np.ndarray:
        clipped = np.where(corner * X < 25.0, X, corner)
        return np.sum(5.0 * np.abs(s) - s * clipped, axis=1)

    return linear_slope


SHIFTED_FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sphere": sphere,
    "rastrigin": rastrigin,
    "rosenbrock": rosenbrock,
    "schwefel": schwefel,
    "griewank": griewank,
    "ackley": ackley,
    "weierstrass-like": weierstrass_like,
}

FUNCTION_IDS: List[str] = list(SHIFTED_FUNCTIONS) + ["linear-slope"]


@dataclass(frozen=True)
class SyntheticInstance:
    """A seeded instance of one synthetic function"""

    function_id: str
    dim: int
    shift: np.ndarray
    known_optimum: float = 0.0

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.function_id == "linear-slope":
            return linear_slope_factory(np.sign(self.shift))(X)
        return SHIFTED_FUNCTIONS[self.function_id](X - self.shift[None, :])


def make_instance(function_id: str, dim: int, seed: int) -> SyntheticInstance:
    """Draw the seeded shift of a synthetic function

    Raises:
        UnknownFunctionId: If function_id is not in FUNCTION_IDS
    """
    if function_id not in FUNCTION_IDS:
        raise UnknownFunctionId(f"Unknown synthetic function: {function_id!r}")
    if dim < 1:
        raise ValueError(f"Synthetic dimension must be >= 1, got {dim}")
    stream = RandomStream(seed, (FUNCTION_IDS.index(function_id), dim))
    if function_id == "linear-slope":
        signs = np.where(stream.draw_uniform(size=dim) < 0.5, -1.0, 1.0)
        shift = 5.0 * signs
    else:
        shift = stream.draw_uniform(SYNTHETIC_BOUNDS[0], SYNTHETIC_BOUNDS[1], size=dim)
    return SyntheticInstance(function_id, dim, shift)


def synthetic(function_id: str, dim: int, seed: int = 0) -> ProblemSpec:
    """Synthetic benchmark problem with a seeded shift inside [-5, 5]^D

    Args:
        function_id: One of FUNCTION_IDS
        dim: Dimension, >= 1
        seed: Seed of the shift

    Returns:
        ProblemSpec with known_optimum 0
    """
    instance = make_instance(function_id, dim, seed)
    return ProblemSpec(
        name=f"synthetic:{function_id}:{dim}",
        dim=dim,
        lower_bounds=np.full(dim, SYNTHETIC_BOUNDS[0]),
        upper_bounds=np.full(dim, SYNTHETIC_BOUNDS[1]),
        function=instance,
        maximize=False,
        known_optimum=instance.known_optimum,
        metadata={"function_id": function_id, "seed": seed, "shift": instance.shift.tolist()},
    )
