"""Proxy problems built from evolved trees"""

from typing import Optional

import numpy as np

from ..core.problem import ProblemSpec
from .evaluator import compile_tree
from .serializer import parse_prefix
from .types import ExpressionTree

# Fraction of the design's (median - minimum) gap placed between the
# design minimum and the AOCC reference.
REFERENCE_MARGIN = 0.1


def reference_optimum(values: np.ndarray) -> Optional[float]:
    """AOCC reference below the best design value

    A proxy's true minimum is unknown. The reference sits under the design
    minimum by REFERENCE_MARGIN x (median - minimum), so runs that improve
    on every design point still separate until they pass that margin.
    Returns None when no design value is finite.
    """
    finite = np.asarray(values, dtype=float)
    finite = finite[np.isfinite(finite)]
    if finite.size == 0:
        return None
    low = float(finite.min())
    return low - REFERENCE_MARGIN * (float(np.median(finite)) - low)


def proxy_problem(
    tree: ExpressionTree,
    target: ProblemSpec,
    X: Optional[np.ndarray] = None,
    name: Optional[str] = None,
) -> ProblemSpec:
    """Wrap a tree as a problem over the target's box

    Args:
        tree: Scalar-rooted tree
        target: Target problem providing dim and bounds
        X: Design points; when given, the AOCC reference optimum is derived
            from the proxy's values on X (see reference_optimum). Without X
            the proxy has no reference and AOCC uses raw values.
        name: Problem name, defaults to proxy:<prefix text>

    Returns:
        Minimization ProblemSpec
    """
    objective = compile_tree(tree)
    optimum = None
    metadata = {"tree": tree.key(), "target": target.name}
    if X is not None:
        values = objective(np.asarray(X, dtype=float))
        optimum = reference_optimum(values)
        finite = values[np.isfinite(values)]
        if finite.size:
            metadata["design_minimum"] = float(finite.min())
    return ProblemSpec(
        name=name or f"proxy:{tree.key()}",
        dim=target.dim,
        lower_bounds=target.lower_bounds,
        upper_bounds=target.upper_bounds,
        function=objective,
        maximize=False,
        known_optimum=optimum,
        clip_range=target.clip_range,
        metadata=metadata,
    )


def proxy_problem_from_text(
    text: str, target: ProblemSpec, X: Optional[np.ndarray] = None, name: Optional[str] = None
) -> ProblemSpec:
    return proxy_problem(parse_prefix(text), target, X, name)
