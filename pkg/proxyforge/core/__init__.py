"""Core abstractions shared by every proxyforge module"""

from .budget import (
    Bounds,
    BudgetedEvaluator,
    BudgetLedger,
    EvalKind,
    Phase,
    TraceEntry,
)
from .errors import (
    ArtifactMissing,
    BudgetExhausted,
    DegenerateSample,
    DimensionMismatch,
    EmptyRetention,
    FeatureMismatch,
    InvalidClipRange,
    InvalidConfig,
    MalformedResponse,
    NonPhysical,
    NoValidCandidate,
    ProposerUnavailable,
    ProxyForgeError,
    TreeParseError,
    TreeTypeError,
    UnknownFunctionId,
    UnknownProblem,
)
from .metrics import aocc, best_so_far, convergence_curve, normalized_curve
from .problem import DEFAULT_CLIP_RANGE, ProblemSpec
from .records import RunRecord
from .rng import RandomStream, seeded_rng


def evaluate(evaluator: BudgetedEvaluator, x) -> float:
    """Evaluate x through a budgeted evaluator"""
    return evaluator.evaluate(x)


__all__ = [
    "ArtifactMissing",
    "Bounds",
    "BudgetExhausted",
    "BudgetedEvaluator",
    "BudgetLedger",
    "DEFAULT_CLIP_RANGE",
    "DegenerateSample",
    "DimensionMismatch",
    "EmptyRetention",
    "EvalKind",
    "FeatureMismatch",
    "InvalidClipRange",
    "InvalidConfig",
    "MalformedResponse",
    "NonPhysical",
    "NoValidCandidate",
    "Phase",
    "ProblemSpec",
    "ProposerUnavailable",
    "ProxyForgeError",
    "RandomStream",
    "RunRecord",
    "TraceEntry",
    "TreeParseError",
    "TreeTypeError",
    "UnknownFunctionId",
    "UnknownProblem",
    "aocc",
    "best_so_far",
    "convergence_curve",
    "evaluate",
    "normalized_curve",
    "seeded_rng",
]
