"""Genetic programming of proxy functions"""

from .evaluator import TreeEvaluator, compile_and_evaluate, compile_tree
from .evolve import EvolutionResult, GPParams, ProxyEvolver, evolve, top_k, tournament
from .fitness import PENALTY, ProxyCandidate, evaluate_candidate, fitness
from .operators import TreeGenerator, init_half_and_half, one_point_crossover, subtree_mutation
from .primitives import DEFAULT_REGISTRY, Primitive, PrimitiveRegistry, Shape
from .proxy import proxy_problem, proxy_problem_from_text
from .serializer import parse_prefix, to_prefix
from .type_checker import TypeChecker, is_well_typed
from .types import ExpressionTree, Node, ValueType
from .visitor import TreeVisitor

__all__ = [
    "DEFAULT_REGISTRY",
    "EvolutionResult",
    "ExpressionTree",
    "GPParams",
    "Node",
    "PENALTY",
    "Primitive",
    "PrimitiveRegistry",
    "ProxyCandidate",
    "ProxyEvolver",
    "Shape",
    "TreeEvaluator",
    "TreeGenerator",
    "TreeVisitor",
    "TypeChecker",
    "ValueType",
    "compile_and_evaluate",
    "compile_tree",
    "evaluate_candidate",
    "evolve",
    "fitness",
    "init_half_and_half",
    "is_well_typed",
    "one_point_crossover",
    "parse_prefix",
    "proxy_problem",
    "proxy_problem_from_text",
    "subtree_mutation",
    "to_prefix",
    "top_k",
    "tournament",
]
