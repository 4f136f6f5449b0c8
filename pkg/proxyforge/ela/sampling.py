"""Space-filling design samples for landscape characterization"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from ..core.budget import BudgetLedger, EvalKind, Phase
from ..core.errors import BudgetExhausted
from ..core.problem import ProblemSpec
from ..core.rng import RandomStream

logger = logging.getLogger(__name__)

LHS_SAMPLER = "lhs"


@dataclass
class DesignSample:
    """Design points and their objective values

    Attributes:
        X: Points, shape (N, D), inside the problem box
        y: Minimized objective values, shape (N,)
        sampler_id: Sampler that produced X
        seed: Seed of the sampler stream
    """

    X: np.ndarray
    y: np.ndarray
    sampler_id: str = LHS_SAMPLER
    seed: Optional[int] = None

    @property
    def size(self) -> int:
        return int(self.X.shape[0])

    @property
    def dim(self) -> int:
        return int(self.X.shape[1])

    def subset(self, rows: np.ndarray) -> "DesignSample":
        return DesignSample(self.X[rows], self.y[rows], self.sampler_id, self.seed)

    def with_values(self, y: np.ndarray) -> "DesignSample":
        """Same design points, other objective values"""
        return DesignSample(self.X, np.asarray(y, dtype=float).reshape(-1), self.sampler_id, self.seed)


def design_points(problem: ProblemSpec, n_points: int, rng: RandomStream) -> np.ndarray:
    """Latin hypercube points scaled to the problem box

    Args:
        problem: Problem providing dim and bounds
        n_points: Number of points N
        rng: Random stream of the design

    Returns:
        Array of shape (N, D)
    """
    sampler = qmc.LatinHypercube(d=problem.dim, seed=rng.generator)
    unit = sampler.random(n=n_points)
    return qmc.scale(unit, problem.lower_bounds, problem.upper_bounds)


def sample_design(
    problem: ProblemSpec,
    coef_ela: int,
    rng: RandomStream,
    ledger: Optional[BudgetLedger] = None,
    budget: Optional[int] = None,
    target: bool = True,
) -> DesignSample:
    """Draw a design of coef_ela x D points and evaluate the problem on it

    Args:
        problem: Problem to characterize
        coef_ela: Sample-size coefficient, >= 1
        rng: Random stream of the design
        ledger: Ledger charged with the N evaluations
        budget: Evaluations allowed for the design, unlimited when None
        target: Charge the ledger as target sample evaluations (True)
            or as proxy evaluations of the generation phase (False)

    Returns:
        DesignSample with N = coef_ela x D rows

    Raises:
        BudgetExhausted: If N exceeds the given budget
    """
    if coef_ela < 1:
        raise ValueError(f"coef_ELA must be >= 1, got {coef_ela}")
    n_points = coef_ela * problem.dim
    if budget is not None and n_points > budget:
        raise BudgetExhausted(
            f"Design of {n_points} points exceeds the budget of {budget} evaluations"
        )
    X = design_points(problem, n_points, rng)
    y = problem.values(X)
    if ledger is not None:
        if target:
            ledger.charge_sample(n_points)
        else:
            ledger.charge(Phase.GENERATION, EvalKind.PROXY, n_points)
    logger.debug("Sampled %d design points on %s", n_points, problem.name)
    return DesignSample(X, y, LHS_SAMPLER, rng.master_seed)
