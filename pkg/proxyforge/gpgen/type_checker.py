"""Type checker for expression trees

Infers the value type of every node bottom-up and enforces the
scalar/vector rules: reductions and scans need vector arguments,
elementwise operators broadcast, and the root must be scalar.
"""

from typing import Dict, Optional

from ..core.errors import TreeTypeError
from .primitives import DEFAULT_REGISTRY, PrimitiveRegistry
from .types import ExpressionTree, Node, ValueType
from .visitor import TreeVisitor


class TypeChecker(TreeVisitor):
    """Infers node types; raises TreeTypeError on the first violation"""

    def __init__(self, registry: Optional[PrimitiveRegistry] = None) -> None:
        self.registry = registry or DEFAULT_REGISTRY
        self._types: Dict[int, ValueType] = {}

    def generic_visit(self, node: Node) -> ValueType:
        primitive = self.registry.get(node.name)
        child_types = self.visit_children(node)
        if node.name == "a" and node.value is None:
            raise TreeTypeError("Constant node without a value")
        result = primitive.result_type(child_types)
        self._types[id(node)] = result
        return result

    def infer(self, node: Node) -> ValueType:
        return self.visit(node)

    def node_types(self, tree: ExpressionTree) -> Dict[int, ValueType]:
        """Type of every node keyed by id(node), from a single pass"""
        self._types = {}
        self.visit(tree.root)
        return dict(self._types)

    def check(self, tree: ExpressionTree) -> ValueType:
        """Check a whole tree

        Returns:
            The root type (always SCALAR on success)

        Raises:
            TreeTypeError: If any edge is ill-typed or the root is a vector
        """
        root_type = self.visit(tree.root)
        if root_type is not ValueType.SCALAR:
            raise TreeTypeError("Tree root must produce a scalar")
        return root_type


def is_well_typed(tree: ExpressionTree, registry: Optional[PrimitiveRegistry] = None) -> bool:
    try:
        TypeChecker(registry).check(tree)
    except TreeTypeError:
        return False
    return True
