"""Compilation of expression trees to batch objectives

Scalars are carried as (N, 1) arrays and vectors as (N, D) arrays, so
elementwise operators broadcast scalars over vectors for free.
"""

import zlib
from typing import Optional

import numpy as np

from ..core.errors import TreeTypeError
from ..core.rng import RandomStream
from .types import ExpressionTree, Node
from .visitor import TreeVisitor

PROTECTION_EPSILON = 1e-9
LOG_EPSILON = 1e-12
EXP_CLAMP = 50.0


def protected_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a / b where |b| > 1e-9, else 1"""
    a, b = np.broadcast_arrays(a, b)
    safe = np.abs(b) > PROTECTION_EPSILON
    out = np.ones(a.shape, dtype=float)
    np.divide(a, b, out=out, where=safe)
    return out


def protected_ln(a: np.ndarray) -> np.ndarray:
    """ln|a| where |a| >= 1e-12, else 0"""
    magnitude = np.abs(a)
    safe = magnitude >= LOG_EPSILON
    out = np.zeros(a.shape, dtype=float)
    np.log(magnitude, out=out, where=safe)
    return out


class TreeEvaluator(TreeVisitor):
    """Evaluates a tree on a batch of points"""

    def __init__(self, X: np.ndarray, rng: Optional[RandomStream] = None) -> None:
        """Initialize evaluator

        Args:
            X: Points, shape (N, D)
            rng: Stream for `rand` nodes; each node draws N fresh values
        """
        self.X = np.atleast_2d(np.asarray(X, dtype=float))
        self.rng = rng or RandomStream(0)
        self.n_points, self.dim = self.X.shape

    def generic_visit(self, node: Node) -> np.ndarray:
        raise ValueError(f"Cannot evaluate primitive {node.name!r}")

    # terminals

    def visit_a(self, node: Node) -> np.ndarray:
        return np.full((self.n_points, 1), float(node.value))

    def visit_rand(self, node: Node) -> np.ndarray:
        return self.rng.draw_uniform(0.0, 1.0, size=(self.n_points, 1))

    def visit_index(self, node: Node) -> np.ndarray:
        return np.tile(np.arange(1, self.dim + 1, dtype=float), (self.n_points, 1))

    def visit_x(self, node: Node) -> np.ndarray:
        return self.X.copy()

    # binary

    def visit_add(self, node: Node) -> np.ndarray:
        a, b = self.visit_children(node)
        return a + b

    def visit_sub(self, node: Node) -> np.ndarray:
        a, b = self.visit_children(node)
        return a - b

    def visit_mul(self, node: Node) -> np.ndarray:
        a, b = self.visit_children(node)
        return a * b

    def visit_div(self, node: Node) -> np.ndarray:
        a, b = self.visit_children(node)
        return protected_div(a, b)

    # unary

    def visit_neg(self, node: Node) -> np.ndarray:
        return -self.visit(node.children[0])

    def visit_rec(self, node: Node) -> np.ndarray:
        a = self.visit(node.children[0])
        return protected_div(np.ones_like(a), a)

    def visit_multen(self, node: Node) -> np.ndarray:
        return 10.0 * self.visit(node.children[0])

    def visit_square(self, node: Node) -> np.ndarray:
        return self.visit(node.children[0]) ** 2

    def visit_abs(self, node: Node) -> np.ndarray:
        return np.abs(self.visit(node.children[0]))

    def visit_sqrt(self, node: Node) -> np.ndarray:
        return np.sqrt(np.abs(self.visit(node.children[0])))

    def visit_exp(self, node: Node) -> np.ndarray:
        return np.exp(np.minimum(self.visit(node.children[0]), EXP_CLAMP))

    def visit_ln(self, node: Node) -> np.ndarray:
        return protected_ln(self.visit(node.children[0]))

    def visit_sin(self, node: Node) -> np.ndarray:
        return np.sin(2.0 * np.pi * self.visit(node.children[0]))

    def visit_cos(self, node: Node) -> np.ndarray:
        return np.cos(2.0 * np.pi * self.visit(node.children[0]))

    def visit_round(self, node: Node) -> np.ndarray:
        return np.ceil(self.visit(node.children[0]))

    # vector-oriented

    def visit_sum(self, node: Node) -> np.ndarray:
        return np.sum(self.visit(node.children[0]), axis=1, keepdims=True)

    def visit_mean(self, node: Node) -> np.ndarray:
        return np.mean(self.visit(node.children[0]), axis=1, keepdims=True)

    def visit_cum(self, node: Node) -> np.ndarray:
        return np.cumsum(self.visit(node.children[0]), axis=1)

    def visit_prod(self, node: Node) -> np.ndarray:
        return np.prod(self.visit(node.children[0]), axis=1, keepdims=True)

    def visit_max(self, node: Node) -> np.ndarray:
        return np.max(self.visit(node.children[0]), axis=1, keepdims=True)


def compile_and_evaluate(
    tree: ExpressionTree, X: np.ndarray, rng: Optional[RandomStream] = None
) -> np.ndarray:
    """Evaluate a scalar-rooted tree on every row of X

    Args:
        tree: Type-correct tree
        X: Points, shape (N, D)
        rng: Stream for `rand` nodes

    Returns:
        Values, shape (N,); may contain non-finite entries
    """
    evaluator = TreeEvaluator(X, rng)
    with np.errstate(all="ignore"):
        result = evaluator.visit(tree.root)
    result = np.asarray(result, dtype=float)
    if result.ndim == 2 and result.shape[1] != 1:
        raise TreeTypeError("Tree root produced a vector")
    return np.broadcast_to(result.reshape(-1), (evaluator.n_points,)).copy()


def batch_stream(X: np.ndarray) -> RandomStream:
    """Stream for `rand` nodes determined by the batch contents"""
    data = np.ascontiguousarray(np.asarray(X, dtype=float))
    return RandomStream(zlib.crc32(data.tobytes()))


def compile_tree(tree: ExpressionTree):
    """Batch objective X -> values; `rand` draws are a function of X"""

    def objective(X: np.ndarray) -> np.ndarray:
        return compile_and_evaluate(tree, X, batch_stream(X))

    return objective
