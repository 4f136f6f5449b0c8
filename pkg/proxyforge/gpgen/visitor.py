"""Visitor base class for expression trees

Dispatches on the primitive name of each node.
"""

from abc import ABC
from typing import Any, List

from .types import Node


class TreeVisitor(ABC):
    """Base visitor for expression-tree traversal

    Override visit_<primitive> methods to handle specific primitives.
    Nodes without a dedicated method go to generic_visit.
    """

    def visit(self, node: Node) -> Any:
        """Visit a node using double-dispatch on its primitive name

        Args:
            node: Tree node to visit

        Returns:
            Result from the visit method
        """
        method = getattr(self, f"visit_{node.name}", self.generic_visit)
        return method(node)

    def visit_children(self, node: Node) -> List[Any]:
        return [self.visit(child) for child in node.children]

    def generic_visit(self, node: Node) -> Any:
        """Default visitor - visit all children, return their results"""
        return self.visit_children(node)
