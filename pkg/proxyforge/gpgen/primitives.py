"""Primitive catalog for proxy-function expression trees

Defines the 24 primitives (constants, variables, binary, unary and
vector-oriented operators) with their typing rules. Provides lookup
methods used by tree generation, type checking and evaluation.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence

from ..core.errors import TreeTypeError
from .types import ValueType


class Shape(Enum):
    """How a primitive's output type follows from its inputs"""

    TERMINAL = "terminal"        # fixed output, no inputs
    ELEMENTWISE = "elementwise"  # vector if any input is a vector, else scalar
    REDUCTION = "reduction"      # vector -> scalar
    SCAN = "scan"                # vector -> vector


@dataclass(frozen=True)
class Primitive:
    """Metadata for one primitive

    Attributes:
        name: Primitive name used in the prefix text form
        arity: Number of children (0, 1 or 2)
        shape: Typing rule
        output_type: Output type of terminals; None for polymorphic ops
        syntax: Mathematical meaning, for documentation
    """

    name: str
    arity: int
    shape: Shape
    output_type: Optional[ValueType]
    syntax: str

    @property
    def is_terminal(self) -> bool:
        return self.arity == 0

    def check_arguments(self, child_types: Sequence[ValueType]) -> None:
        """Validate child types against this primitive's rule

        Raises:
            TreeTypeError: On arity or type violations
        """
        if len(child_types) != self.arity:
            raise TreeTypeError(f"{self.name} takes {self.arity} arguments, got {len(child_types)}")
        if self.shape in (Shape.REDUCTION, Shape.SCAN) and child_types[0] is not ValueType.VECTOR:
            raise TreeTypeError(f"{self.name} needs a vector argument")

    def result_type(self, child_types: Sequence[ValueType]) -> ValueType:
        """Output type for the given child types"""
        self.check_arguments(child_types)
        if self.shape is Shape.TERMINAL:
            return self.output_type
        if self.shape is Shape.REDUCTION:
            return ValueType.SCALAR
        if self.shape is Shape.SCAN:
            return ValueType.VECTOR
        return ValueType.VECTOR if ValueType.VECTOR in child_types else ValueType.SCALAR

    def can_return(self, value_type: ValueType) -> bool:
        if self.shape is Shape.TERMINAL:
            return self.output_type is value_type
        if self.shape is Shape.REDUCTION:
            return value_type is ValueType.SCALAR
        if self.shape is Shape.SCAN:
            return value_type is ValueType.VECTOR
        return True


class PrimitiveRegistry:
    """Registry of the primitive set

    Provides methods to look up primitives and to list terminals and
    operators able to produce a requested type.
    """

    def __init__(self, use_rand: bool = True) -> None:
        """Initialize registry with all primitives

        Args:
            use_rand: Include the `rand` terminal
        """
        self._primitives: Dict[str, Primitive] = {}
        self.use_rand = use_rand
        self._initialize_primitives()

    def _initialize_primitives(self) -> None:
        self._initialize_constants()
        self._initialize_variables()
        self._initialize_binary()
        self._initialize_unary()
        self._initialize_vector()

    def _initialize_constants(self) -> None:
        self._add(Primitive("a", 0, Shape.TERMINAL, ValueType.SCALAR, "constant in [-10, 10]"))
        self._add(Primitive("rand", 0, Shape.TERMINAL, ValueType.SCALAR, "uniform [0, 1) per point"))

    def _initialize_variables(self) -> None:
        self._add(Primitive("index", 0, Shape.TERMINAL, ValueType.VECTOR, "(1, 2, ..., d)"))
        self._add(Primitive("x", 0, Shape.TERMINAL, ValueType.VECTOR, "(x_1, ..., x_d)"))

    def _initialize_binary(self) -> None:
        for name, syntax in [
            ("add", "a + b"),
            ("sub", "a - b"),
            ("mul", "a * b"),
            ("div", "a / b"),
        ]:
            self._add(Primitive(name, 2, Shape.ELEMENTWISE, None, syntax))

    def _initialize_unary(self) -> None:
        for name, syntax in [
            ("neg", "-a"),
            ("rec", "1 / a"),
            ("multen", "10 a"),
            ("square", "a^2"),
            ("abs", "|a|"),
            ("sqrt", "sqrt(|a|)"),
            ("exp", "e^a"),
            ("ln", "ln|a|"),
            ("sin", "sin(2 pi a)"),
            ("cos", "cos(2 pi a)"),
            ("round", "ceil(a)"),
        ]:
            self._add(Primitive(name, 1, Shape.ELEMENTWISE, None, syntax))

    def _initialize_vector(self) -> None:
        self._add(Primitive("sum", 1, Shape.REDUCTION, None, "sum_i a_i"))
        self._add(Primitive("mean", 1, Shape.REDUCTION, None, "mean_i a_i"))
        self._add(Primitive("cum", 1, Shape.SCAN, None, "(a_1, a_1 + a_2, ...)"))
        self._add(Primitive("prod", 1, Shape.REDUCTION, None, "prod_i a_i"))
        self._add(Primitive("max", 1, Shape.REDUCTION, None, "max_i a_i"))

    def _add(self, primitive: Primitive) -> None:
        self._primitives[primitive.name] = primitive

    def get(self, name: str) -> Primitive:
        """Look up a primitive

        Raises:
            TreeTypeError: If the name is unknown
        """
        if name not in self._primitives:
            raise TreeTypeError(f"Unknown primitive: {name!r}")
        return self._primitives[name]

    def has_primitive(self, name: str) -> bool:
        return name in self._primitives

    def all_primitives(self) -> List[Primitive]:
        return list(self._primitives.values())

    def _enabled(self, primitive: Primitive) -> bool:
        return self.use_rand or primitive.name != "rand"

    def terminals(self, value_type: ValueType) -> List[Primitive]:
        """Enabled terminals of the given type"""
        return [
            p for p in self._primitives.values()
            if p.is_terminal and p.output_type is value_type and self._enabled(p)
        ]

    def operators(self, value_type: ValueType) -> List[Primitive]:
        """Non-terminals able to return the given type"""
        return [p for p in self._primitives.values() if not p.is_terminal and p.can_return(value_type)]


DEFAULT_REGISTRY = PrimitiveRegistry()
