"""Typed tree generation and variation operators

Generation follows the Full and Grow rules with a root at depth 0.
Crossover swaps same-typed subtrees; mutation regrows a subtree of the
same type. An offspring that leaves the depth bounds is rejected and the
parent is kept.
"""

from typing import List, Optional, Tuple

from ..core.rng import RandomStream
from .primitives import DEFAULT_REGISTRY, Primitive, PrimitiveRegistry, Shape
from .type_checker import TypeChecker
from .types import ExpressionTree, Node, Path, ValueType

FULL = "full"
GROW = "grow"

DEFAULT_CONSTANT_RANGE = (-10.0, 10.0)
DEFAULT_TERMINAL_RATIO = 0.3


class TreeGenerator:
    """Random typed tree construction"""

    def __init__(
        self,
        rng: RandomStream,
        registry: Optional[PrimitiveRegistry] = None,
        constant_range: Tuple[float, float] = DEFAULT_CONSTANT_RANGE,
        terminal_ratio: float = DEFAULT_TERMINAL_RATIO,
    ) -> None:
        self.rng = rng
        self.registry = registry or DEFAULT_REGISTRY
        self.constant_range = constant_range
        self.terminal_ratio = terminal_ratio

    def _choice(self, options: List[Primitive]) -> Primitive:
        return options[int(self.rng.draw_integers(0, len(options)))]

    def terminal(self, value_type: ValueType) -> Node:
        primitive = self._choice(self.registry.terminals(value_type))
        if primitive.name == "a":
            return Node("a", value=float(self.rng.draw_uniform(*self.constant_range)))
        return Node(primitive.name)

    def _child_types(self, primitive: Primitive, value_type: ValueType) -> List[ValueType]:
        if primitive.arity == 1:
            return [ValueType.VECTOR if primitive.shape in (Shape.REDUCTION, Shape.SCAN) else value_type]
        if value_type is ValueType.SCALAR:
            return [ValueType.SCALAR, ValueType.SCALAR]
        layouts = [
            [ValueType.VECTOR, ValueType.VECTOR],
            [ValueType.VECTOR, ValueType.SCALAR],
            [ValueType.SCALAR, ValueType.VECTOR],
        ]
        return layouts[int(self.rng.draw_integers(0, len(layouts)))]

    def generate(
        self,
        value_type: ValueType,
        min_depth: int,
        target_depth: int,
        method: str,
        depth: int = 0,
    ) -> Node:
        """Generate a subtree returning value_type

        Args:
            value_type: Requested output type
            min_depth: Depth before which Grow may not place terminals
            target_depth: Depth at which every branch ends
            method: FULL or GROW
            depth: Depth of the subtree root

        Returns:
            Root node of the generated subtree
        """
        if depth >= target_depth:
            return self.terminal(value_type)
        if method == GROW and depth >= min_depth and self.rng.coin(self.terminal_ratio):
            return self.terminal(value_type)
        primitive = self._choice(self.registry.operators(value_type))
        children = [
            self.generate(child_type, min_depth, target_depth, method, depth + 1)
            for child_type in self._child_types(primitive, value_type)
        ]
        return Node(primitive.name, children)

    def tree(self, min_depth: int, max_depth: int, method: Optional[str] = None) -> ExpressionTree:
        """One tree with target depth uniform in [min_depth, max_depth]"""
        target_depth = int(self.rng.draw_integers(min_depth, max_depth + 1))
        if method is None:
            method = FULL if self.rng.coin(0.5) else GROW
        return ExpressionTree(self.generate(ValueType.SCALAR, min_depth, target_depth, method))


def init_half_and_half(
    n_pop: int,
    min_depth: int,
    max_depth: int,
    rng: RandomStream,
    registry: Optional[PrimitiveRegistry] = None,
    constant_range: Tuple[float, float] = DEFAULT_CONSTANT_RANGE,
) -> List[ExpressionTree]:
    """Ramped half-and-half initial population

    Args:
        n_pop: Population size
        min_depth: Minimum tree depth, >= 3
        max_depth: Maximum tree depth, >= min_depth
        rng: Random stream
        registry: Primitive set
        constant_range: Range of `a` constants

    Returns:
        n_pop trees, each built by Full or Grow on a coin flip
    """
    if min_depth < 3 or max_depth < min_depth:
        raise ValueError(f"Need 3 <= min_depth <= max_depth, got {min_depth}, {max_depth}")
    generator = TreeGenerator(rng, registry, constant_range)
    return [generator.tree(min_depth, max_depth) for _ in range(n_pop)]


def _typed_nodes(tree: ExpressionTree, checker: TypeChecker) -> List[Tuple[Path, Node, int, ValueType]]:
    types = checker.node_types(tree)
    return [(path, node, depth, types[id(node)]) for path, node, depth in tree.walk()]


def _within_bounds(tree: ExpressionTree, min_depth: int, max_depth: int) -> bool:
    return min_depth <= tree.depth <= max_depth


def one_point_crossover(
    parent_a: ExpressionTree,
    parent_b: ExpressionTree,
    rng: RandomStream,
    min_depth: int,
    max_depth: int,
    registry: Optional[PrimitiveRegistry] = None,
) -> Tuple[ExpressionTree, ExpressionTree]:
    """Swap a random subtree of parent_a with a same-typed subtree of parent_b

    Offspring violating the depth bounds are replaced by their parent.
    """
    checker = TypeChecker(registry)
    nodes_a = _typed_nodes(parent_a, checker)
    path_a, node_a, _, type_a = nodes_a[int(rng.draw_integers(0, len(nodes_a)))]
    matches = [entry for entry in _typed_nodes(parent_b, checker) if entry[3] is type_a]
    if not matches:
        return parent_a.copy(), parent_b.copy()
    path_b, node_b, _, _ = matches[int(rng.draw_integers(0, len(matches)))]

    child_a = parent_a.replace(path_a, node_b)
    child_b = parent_b.replace(path_b, node_a)
    if not _within_bounds(child_a, min_depth, max_depth):
        child_a = parent_a.copy()
    if not _within_bounds(child_b, min_depth, max_depth):
        child_b = parent_b.copy()
    return child_a, child_b


def subtree_mutation(
    tree: ExpressionTree,
    rng: RandomStream,
    min_depth: int,
    max_depth: int,
    registry: Optional[PrimitiveRegistry] = None,
    constant_range: Tuple[float, float] = DEFAULT_CONSTANT_RANGE,
) -> ExpressionTree:
    """Replace a random subtree by a freshly grown one of the same type

    A selected `a` constant is re-sampled instead. The replacement depth is
    at most max_depth - node_depth; a result outside the depth bounds is
    rejected and the parent returned.
    """
    checker = TypeChecker(registry)
    nodes = _typed_nodes(tree, checker)
    path, node, depth, value_type = nodes[int(rng.draw_integers(0, len(nodes)))]
    if node.name == "a":
        return tree.replace(path, Node("a", value=float(rng.draw_uniform(*constant_range))))
    generator = TreeGenerator(rng, registry, constant_range)
    budget = max_depth - depth
    target_depth = int(rng.draw_integers(0, budget + 1))
    replacement = generator.generate(value_type, 0, target_depth, GROW)
    mutant = tree.replace(path, replacement)
    if not _within_bounds(mutant, min_depth, max_depth):
        return tree.copy()
    return mutant
