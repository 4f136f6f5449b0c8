"""Value types and tree nodes of the expression-tree genotype

Defines ValueType, the Node dataclass and ExpressionTree, a thin
wrapper providing path-based access used by the variation operators.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Tuple

Path = Tuple[int, ...]


class ValueType(Enum):
    """Types flowing along tree edges"""

    SCALAR = "scalar"
    VECTOR = "vector"


@dataclass
class Node:
    """One primitive application

    Attributes:
        name: Primitive name (e.g. "add", "x", "a")
        children: Argument subtrees, len == primitive arity
        value: Sampled value of an `a` constant, None otherwise
    """

    name: str
    children: List["Node"] = field(default_factory=list)
    value: Optional[float] = None

    def copy(self) -> "Node":
        return Node(self.name, [child.copy() for child in self.children], self.value)

    @property
    def is_terminal(self) -> bool:
        return not self.children


@dataclass
class ExpressionTree:
    """A typed GP individual; compiles to a vector -> scalar function"""

    root: Node

    def copy(self) -> "ExpressionTree":
        return ExpressionTree(self.root.copy())

    def walk(self) -> Iterator[Tuple[Path, Node, int]]:
        """Yield (path, node, depth) in prefix order; the root has depth 0"""
        stack: List[Tuple[Path, Node, int]] = [((), self.root, 0)]
        while stack:
            path, node, depth = stack.pop()
            yield path, node, depth
            for index in range(len(node.children) - 1, -1, -1):
                stack.append((path + (index,), node.children[index], depth + 1))

    @property
    def depth(self) -> int:
        """Number of edges on the longest root-to-leaf path"""
        return max(depth for _, _, depth in self.walk())

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def leaf_depths(self) -> List[int]:
        return [depth for _, node, depth in self.walk() if node.is_terminal]

    def get(self, path: Path) -> Node:
        node = self.root
        for index in path:
            node = node.children[index]
        return node

    def replace(self, path: Path, subtree: Node) -> "ExpressionTree":
        """New tree with the node at path replaced by a copy of subtree"""
        if not path:
            return ExpressionTree(subtree.copy())
        tree = self.copy()
        parent = tree.get(path[:-1])
        parent.children[path[-1]] = subtree.copy()
        return tree

    def key(self) -> str:
        """Structural identity, the prefix text form"""
        from .serializer import to_prefix

        return to_prefix(self)

    def __str__(self) -> str:
        return self.key()
