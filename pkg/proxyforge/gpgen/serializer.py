"""Prefix text form of expression trees

Trees print as nested calls, e.g. `add(sum(square(x)), mul(a=2.5, max(x)))`.
Constants carry their value as `a=<repr>`, so printing then parsing
gives back an identical tree.
"""

import re
from typing import List, Optional, Tuple

from ..core.errors import TreeParseError
from .primitives import DEFAULT_REGISTRY, PrimitiveRegistry
from .types import ExpressionTree, Node
from .visitor import TreeVisitor

_TOKEN = re.compile(
    r"\s*(?:(?P<const>a=(?P<number>[-+]?(?:\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|inf|nan)))"
    r"|(?P<name>[A-Za-z_]+)|(?P<punct>[(),]))"
)


class PrefixPrinter(TreeVisitor):
    """Generates the prefix text form of a tree"""

    def visit_a(self, node: Node) -> str:
        return f"a={float(node.value)!r}"

    def generic_visit(self, node: Node) -> str:
        if not node.children:
            return node.name
        return f"{node.name}({', '.join(self.visit_children(node))})"


def to_prefix(tree: ExpressionTree) -> str:
    return PrefixPrinter().visit(tree.root)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None or match.end() == position:
            raise TreeParseError(f"Unexpected input at offset {position}: {stripped[position:position + 10]!r}")
        if match.group("const"):
            tokens.append(("const", match.group("number")))
        elif match.group("name"):
            tokens.append(("name", match.group("name")))
        else:
            tokens.append(("punct", match.group("punct")))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[Tuple[str, str]], registry: PrimitiveRegistry) -> None:
        self.tokens = tokens
        self.position = 0
        self.registry = registry

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def take(self, kind: str, value: Optional[str] = None) -> str:
        token = self.peek()
        if token is None or token[0] != kind or (value is not None and token[1] != value):
            expected = value or kind
            raise TreeParseError(f"Expected {expected!r} at token {self.position}, got {token!r}")
        self.position += 1
        return token[1]

    def parse_node(self) -> Node:
        token = self.peek()
        if token is None:
            raise TreeParseError("Unexpected end of input")
        if token[0] == "const":
            self.position += 1
            return Node("a", value=float(token[1]))
        name = self.take("name")
        if not self.registry.has_primitive(name):
            raise TreeParseError(f"Unknown primitive: {name!r}")
        primitive = self.registry.get(name)
        if primitive.is_terminal:
            if name == "a":
                raise TreeParseError("Constant without value, expected a=<number>")
            return Node(name)
        self.take("punct", "(")
        children = [self.parse_node()]
        while self.peek() == ("punct", ","):
            self.position += 1
            children.append(self.parse_node())
        self.take("punct", ")")
        if len(children) != primitive.arity:
            raise TreeParseError(f"{name} takes {primitive.arity} arguments, got {len(children)}")
        return Node(name, children)


def parse_prefix(text: str, registry: Optional[PrimitiveRegistry] = None) -> ExpressionTree:
    """Parse the prefix text form

    Raises:
        TreeParseError: On malformed text or unknown primitives
    """
    parser = _Parser(_tokenize(text), registry or DEFAULT_REGISTRY)
    root = parser.parse_node()
    if parser.peek() is not None:
        raise TreeParseError(f"Trailing input after tree at token {parser.position}")
    return ExpressionTree(root)
