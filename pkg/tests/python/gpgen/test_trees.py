"""Tests for the typed expression-tree genotype"""

import math

import numpy as np
import pytest

from proxyforge.core.errors import TreeParseError, TreeTypeError
from proxyforge.core.rng import RandomStream
from proxyforge.gpgen.evaluator import compile_and_evaluate, compile_tree, protected_div, protected_ln
from proxyforge.gpgen.operators import (
    FULL,
    TreeGenerator,
    init_half_and_half,
    one_point_crossover,
    subtree_mutation,
)
from proxyforge.gpgen.primitives import DEFAULT_REGISTRY, PrimitiveRegistry, Shape
from proxyforge.gpgen.serializer import parse_prefix, to_prefix
from proxyforge.gpgen.type_checker import TypeChecker, is_well_typed
from proxyforge.gpgen.types import ExpressionTree, Node, ValueType


def evaluate(text: str, X) -> np.ndarray:
    return compile_and_evaluate(parse_prefix(text), np.atleast_2d(np.asarray(X, dtype=float)))


class TestPrimitives:
    """Test suite for the primitive catalog"""

    def test_catalog_size(self):
        """Test that all 24 primitives are registered"""
        assert len(DEFAULT_REGISTRY.all_primitives()) == 24

    def test_terminal_types(self):
        """Test the scalar and vector terminals"""
        scalars = {p.name for p in DEFAULT_REGISTRY.terminals(ValueType.SCALAR)}
        vectors = {p.name for p in DEFAULT_REGISTRY.terminals(ValueType.VECTOR)}
        assert scalars == {"a", "rand"}
        assert vectors == {"index", "x"}

    def test_rand_can_be_disabled(self):
        """Test that use_rand=False removes the rand terminal"""
        registry = PrimitiveRegistry(use_rand=False)
        assert {p.name for p in registry.terminals(ValueType.SCALAR)} == {"a"}

    def test_reductions_only_return_scalars(self):
        """Test that reductions are not offered for vector outputs"""
        vector_ops = {p.name for p in DEFAULT_REGISTRY.operators(ValueType.VECTOR)}
        assert "sum" not in vector_ops
        assert "cum" in vector_ops
        assert DEFAULT_REGISTRY.get("max").shape is Shape.REDUCTION

    def test_unknown_primitive(self):
        """Test lookup of an unknown name"""
        with pytest.raises(TreeTypeError):
            DEFAULT_REGISTRY.get("tanh")


class TestTypeChecker:
    """Test suite for scalar/vector typing"""

    @pytest.mark.parametrize(
        "text",
        ["sum(x)", "sum(add(x, a=1.0))", "mean(mul(index, square(x)))", "add(a=1.0, rand)", "max(cum(x))"],
    )
    def test_well_typed(self, text):
        """Test trees with a scalar root and valid edges"""
        assert TypeChecker().check(parse_prefix(text)) is ValueType.SCALAR

    @pytest.mark.parametrize("text", ["x", "add(x, a=1.0)", "sum(a=1.0)", "cum(rand)", "sum(sum(x))"])
    def test_ill_typed(self, text):
        """Test vector roots and scalar arguments of vector operators"""
        assert not is_well_typed(parse_prefix(text))
        with pytest.raises(TreeTypeError):
            TypeChecker().check(parse_prefix(text))

    def test_constant_without_value(self):
        """Test that an `a` node must carry its value"""
        with pytest.raises(TreeTypeError):
            TypeChecker().check(ExpressionTree(Node("add", [Node("a"), Node("a", value=1.0)])))


class TestEvaluation:
    """Test suite for compiled trees"""

    def test_sphere(self):
        """Test that sum(square(x)) is the sphere"""
        X = np.array([[1.0, 2.0], [0.0, -3.0]])
        assert list(evaluate("sum(square(x))", X)) == [5.0, 9.0]

    def test_index_weighting(self):
        """Test the (1, ..., d) terminal"""
        assert evaluate("sum(mul(index, x))", [[1.0, 1.0, 1.0]])[0] == pytest.approx(6.0)

    def test_scan_and_reduction(self):
        """Test cumulative sums followed by a max"""
        assert evaluate("max(cum(x))", [[1.0, -2.0, 3.0]])[0] == pytest.approx(2.0)

    def test_scalar_root_broadcasts_over_points(self):
        """Test that a constant tree yields one value per point"""
        assert list(evaluate("add(a=1.5, a=2.0)", np.zeros((3, 2)))) == [3.5, 3.5, 3.5]

    def test_trigonometry_uses_two_pi(self):
        """Test sin(2 pi a) and cos(2 pi a)"""
        assert evaluate("sin(a=0.25)", [[0.0]])[0] == pytest.approx(1.0)
        assert evaluate("cos(a=0.5)", [[0.0]])[0] == pytest.approx(-1.0)

    def test_round_is_ceiling(self):
        """Test that round maps 1.2 to 2"""
        assert evaluate("round(a=1.2)", [[0.0]])[0] == 2.0

    def test_unary_helpers(self):
        """Test multen, sqrt of |a| and exp"""
        assert evaluate("multen(a=0.5)", [[0.0]])[0] == pytest.approx(5.0)
        assert evaluate("sqrt(a=-4.0)", [[0.0]])[0] == pytest.approx(2.0)
        assert evaluate("exp(a=0.0)", [[0.0]])[0] == pytest.approx(1.0)

    def test_protected_operators(self):
        """Test division by ~0 and logarithm of ~0"""
        assert evaluate("div(a=3.0, a=0.0)", [[0.0]])[0] == 1.0
        assert evaluate("rec(a=0.0)", [[0.0]])[0] == 1.0
        assert evaluate("ln(a=0.0)", [[0.0]])[0] == 0.0
        assert protected_div(np.array([4.0]), np.array([2.0]))[0] == 2.0
        assert protected_ln(np.array([-np.e]))[0] == pytest.approx(1.0)

    def test_rand_is_a_function_of_the_batch(self):
        """Test that compiled trees with rand are deterministic per batch"""
        objective = compile_tree(parse_prefix("add(sum(x), rand)"))
        X = np.random.default_rng(0).uniform(size=(5, 2))
        assert np.array_equal(objective(X), objective(X))
        values = objective(X) - X.sum(axis=1)
        assert np.all((values >= 0.0) & (values < 1.0))


class TestSerialization:
    """Test suite for the prefix text form"""

    def test_canonical_text_is_stable(self):
        """Test that printing a parsed canonical text gives it back"""
        text = "add(sum(square(x)), mul(a=2.5, max(x)))"
        assert to_prefix(parse_prefix(text)) == text

    def test_constants_keep_full_precision(self):
        """Test that constant values survive printing exactly"""
        tree = ExpressionTree(Node("sum", [Node("mul", [Node("a", value=0.1 + 0.2), Node("x")])]))
        assert parse_prefix(to_prefix(tree)).root.children[0].children[0].value == 0.1 + 0.2

    @pytest.mark.parametrize("text", ["add(x", "foo(x)", "sum(a)", "sum(x) x", "add(a=1.0)", "", "sum(x,)"])
    def test_malformed_text(self, text):
        """Test that malformed text raises TreeParseError"""
        with pytest.raises(TreeParseError):
            parse_prefix(text)

    def test_depth_and_size(self):
        """Test that depth counts edges from the root"""
        tree = parse_prefix("sum(square(x))")
        assert tree.depth == 2
        assert tree.size == 3
        assert parse_prefix("a=1.0").depth == 0


class TestOperators:
    """Test suite for generation and variation"""

    def test_population_well_typed_within_depth(self):
        """Test ramped half-and-half trees"""
        trees = init_half_and_half(30, 3, 6, RandomStream(0))
        assert len(trees) == 30
        for tree in trees:
            assert is_well_typed(tree)
            assert 3 <= tree.depth <= 6

    def test_full_trees_have_uniform_leaf_depth(self):
        """Test that Full ends every branch at the target depth"""
        tree = TreeGenerator(RandomStream(2)).tree(4, 4, FULL)
        assert set(tree.leaf_depths()) == {4}

    def test_invalid_depth_range(self):
        """Test the minimum depth of 3"""
        with pytest.raises(ValueError):
            init_half_and_half(5, 2, 6, RandomStream(0))

    def test_crossover_keeps_types_and_depth(self):
        """Test that offspring are well typed and inside the depth bounds"""
        rng = RandomStream(5)
        trees = init_half_and_half(10, 3, 6, rng.child(0))
        for i in range(0, 10, 2):
            for child in one_point_crossover(trees[i], trees[i + 1], rng.child(1, i), 3, 6):
                assert is_well_typed(child)
                assert 3 <= child.depth <= 6

    def test_mutation_keeps_types_and_depth(self):
        """Test that mutants are well typed and inside the depth bounds"""
        rng = RandomStream(6)
        for i, tree in enumerate(init_half_and_half(15, 3, 6, rng.child(0))):
            mutant = subtree_mutation(tree, rng.child(1, i), 3, 6)
            assert is_well_typed(mutant)
            assert 3 <= mutant.depth <= 6

    def test_mutation_does_not_modify_parent(self):
        """Test that variation copies its inputs"""
        tree = parse_prefix("sum(square(add(x, a=1.0)))")
        before = to_prefix(tree)
        subtree_mutation(tree, RandomStream(0), 3, 6)
        assert to_prefix(tree) == before

    def test_long_variation_sequence_stays_valid(self):
        """Test 10,000 random crossovers and mutations for type safety and depth"""
        rng = RandomStream(21)
        pool = init_half_and_half(20, 3, 6, rng.child(0))
        picker = np.random.default_rng(21)
        for step in range(10_000):
            stream = rng.child(1, step)
            if step % 2 == 0:
                i, j = picker.choice(len(pool), size=2, replace=False)
                results = one_point_crossover(pool[i], pool[j], stream, 3, 6)
                pool[i], pool[j] = results
            else:
                i = int(picker.integers(len(pool)))
                results = (subtree_mutation(pool[i], stream, 3, 6),)
                pool[i] = results[0]
            for tree in results:
                assert is_well_typed(tree)
                assert 3 <= tree.depth <= 6


def _lift(function, *args):
    if any(isinstance(arg, list) for arg in args):
        width = max(len(arg) for arg in args if isinstance(arg, list))
        columns = [arg if isinstance(arg, list) else [arg] * width for arg in args]
        return [function(*values) for values in zip(*columns)]
    return function(*args)


def _guarded_div(a, b):
    return a / b if abs(b) > 1e-9 else 1.0


def _guarded_ln(a):
    return math.log(abs(a)) if abs(a) >= 1e-12 else 0.0


def _running_sum(values):
    out, total = [], 0.0
    for value in values:
        total += value
        out.append(total)
    return out


def _product(values):
    out = 1.0
    for value in values:
        out *= value
    return out


ELEMENTWISE = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _guarded_div,
    "neg": lambda a: -a,
    "rec": lambda a: _guarded_div(1.0, a),
    "multen": lambda a: 10.0 * a,
    "square": lambda a: a * a,
    "abs": abs,
    "sqrt": lambda a: math.sqrt(abs(a)),
    "exp": lambda a: math.exp(min(a, 50.0)),
    "ln": _guarded_ln,
    "sin": lambda a: math.sin(2.0 * math.pi * a),
    "cos": lambda a: math.cos(2.0 * math.pi * a),
    "round": lambda a: float(math.ceil(a)),
}

REDUCTIONS = {
    "sum": sum,
    "mean": lambda values: sum(values) / len(values),
    "prod": _product,
    "max": max,
    "cum": _running_sum,
}


def interpret(node: Node, point):
    """Value of node at one point, computed recursively on Python floats"""
    if node.name == "a":
        return float(node.value)
    if node.name == "x":
        return [float(v) for v in point]
    if node.name == "index":
        return [float(i) for i in range(1, len(point) + 1)]
    args = [interpret(child, point) for child in node.children]
    if node.name in REDUCTIONS:
        return REDUCTIONS[node.name](args[0])
    return _lift(ELEMENTWISE[node.name], *args)


HAND_BUILT_TREES = [
    "sum(square(x))",
    "mean(x)",
    "prod(add(x, a=1.5))",
    "max(cum(x))",
    "sum(mul(index, x))",
    "sum(div(x, index))",
    "div(sum(x), max(abs(x)))",
    "ln(prod(x))",
    "exp(neg(sum(square(x))))",
    "sqrt(sum(sub(x, a=2.0)))",
    "sum(sin(x))",
    "sum(cos(mul(a=0.5, x)))",
    "sum(round(x))",
    "multen(mean(rec(add(square(x), a=1.0))))",
    "sub(max(x), mean(cum(index)))",
    "add(a=3.0, mul(a=-2.0, sum(abs(x))))",
    "sum(exp(x))",
    "mean(ln(square(x)))",
    "rec(add(sum(square(x)), a=0.5))",
    "max(mul(sin(x), cos(x)))",
]


class TestRecursiveOracle:
    """Test suite comparing batch evaluation with a per-point interpreter"""

    @pytest.mark.parametrize("text", HAND_BUILT_TREES)
    def test_matches_interpreter(self, text):
        """Test that compiled output equals the recursive interpretation"""
        tree = parse_prefix(text)
        X = np.random.default_rng(3).uniform(-3.0, 3.0, size=(10, 3))
        expected = [interpret(tree.root, row) for row in X]
        assert list(compile_and_evaluate(tree, X)) == pytest.approx(expected, rel=1e-12, abs=1e-12)
