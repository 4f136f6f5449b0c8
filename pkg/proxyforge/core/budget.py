"""Budgeted evaluation and the budget ledger

The BudgetedEvaluator is the only way optimizers reach an objective: it
clips to bounds, counts calls, refuses the (budget+1)-th call and keeps
the best-so-far trace. The BudgetLedger separates cheap proxy evaluations
from expensive target evaluations per pipeline phase.
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .errors import BudgetExhausted, DimensionMismatch
from .problem import ProblemSpec

logger = logging.getLogger(__name__)

_NON_FINITE_SUBSTITUTE = float(np.finfo(float).max)


class Phase(Enum):
    """Pipeline phases an evaluation can be charged to"""

    GENERATION = "generation"
    DISCOVERY = "discovery"
    VALIDATION = "validation"
    BASELINE = "baseline"


class EvalKind(Enum):
    """Cost class of an evaluation"""

    PROXY = "proxy"
    TARGET = "target"


class BudgetLedger:
    """Accounting of proxy and target evaluations per phase

    Design-sample evaluations of the target (landscape characterization)
    are tracked separately as sample_evals; target_evals counts the
    evaluations spent by algorithms on the target.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counts: Dict[Phase, Dict[EvalKind, int]] = {
            phase: {kind: 0 for kind in EvalKind} for phase in Phase
        }
        self.sample_evals = 0

    def charge(self, phase: Phase, kind: EvalKind, count: int = 1) -> None:
        """Record `count` evaluations of the given kind in a phase"""
        with self._lock:
            self._counts[phase][kind] += count

    def charge_sample(self, count: int) -> None:
        """Record target evaluations spent on a landscape design sample"""
        with self._lock:
            self.sample_evals += count

    def count(self, phase: Phase, kind: EvalKind) -> int:
        return self._counts[phase][kind]

    @property
    def proxy_evals(self) -> int:
        return sum(self._counts[phase][EvalKind.PROXY] for phase in Phase)

    @property
    def target_evals(self) -> int:
        """Target evaluations by algorithms, baselines excluded"""
        return sum(
            self._counts[phase][EvalKind.TARGET]
            for phase in Phase
            if phase is not Phase.BASELINE
        )

    def h2_ratio(self, direct_equivalent_evals: int) -> Optional[float]:
        """Ratio of hypothetical direct-discovery cost to actual target cost

        Args:
            direct_equivalent_evals: Target evaluations a direct-discovery
                run would have needed (iterations x repetitions x budget)

        Returns:
            The ratio, or None when no target evaluation was spent
        """
        if self.target_evals == 0:
            return None
        return direct_equivalent_evals / self.target_evals

    def merge(self, other: "BudgetLedger") -> None:
        """Add another ledger's counts into this one"""
        with self._lock:
            for phase in Phase:
                for kind in EvalKind:
                    self._counts[phase][kind] += other._counts[phase][kind]
            self.sample_evals += other.sample_evals

    def to_dict(self) -> Dict[str, object]:
        return {
            "proxy_evals": self.proxy_evals,
            "target_evals": self.target_evals,
            "sample_evals": self.sample_evals,
            "phases": {
                phase.value: {kind.value: self._counts[phase][kind] for kind in EvalKind}
                for phase in Phase
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "BudgetLedger":
        ledger = cls()
        ledger.sample_evals = int(data.get("sample_evals", 0))
        for phase_name, counts in dict(data.get("phases", {})).items():
            for kind_name, value in counts.items():
                ledger._counts[Phase(phase_name)][EvalKind(kind_name)] = int(value)
        return ledger


@dataclass(frozen=True)
class TraceEntry:
    """One evaluation of a run: index (1-based), raw value, best so far"""

    evaluation: int
    raw: float
    best: float


class Bounds:
    """Box bounds exposed as `lb`/`ub`, the convention optimizers expect"""

    def __init__(self, lb: np.ndarray, ub: np.ndarray) -> None:
        self.lb = lb
        self.ub = ub


class BudgetedEvaluator:
    """Single-owner, budget-limited view of a problem

    Values are minimized (maximization problems are converted by the
    ProblemSpec). Out-of-bounds candidates are clipped, never rejected.
    """

    def __init__(
        self,
        problem: ProblemSpec,
        budget: int,
        ledger: Optional[BudgetLedger] = None,
        phase: Phase = Phase.VALIDATION,
        kind: EvalKind = EvalKind.TARGET,
    ) -> None:
        """Initialize evaluator

        Args:
            problem: Problem to evaluate
            budget: Number of evaluations allowed
            ledger: Optional ledger charged with every evaluation
            phase: Ledger phase of the evaluations
            kind: Ledger cost class of the evaluations
        """
        if budget < 1:
            raise ValueError(f"Budget must be positive, got {budget}")
        self.problem = problem
        self.budget = int(budget)
        self.ledger = ledger
        self.phase = phase
        self.kind = kind
        self.used = 0
        self._trace: List[TraceEntry] = []
        self.best_value = float("inf")
        self.best_x: Optional[np.ndarray] = None
        self.bounds = Bounds(problem.lower_bounds, problem.upper_bounds)

    @property
    def dim(self) -> int:
        return self.problem.dim

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    @property
    def trace(self) -> List[TraceEntry]:
        return list(self._trace)

    def best_so_far(self) -> np.ndarray:
        return np.array([entry.best for entry in self._trace], dtype=float)

    def evaluate(self, x: np.ndarray) -> float:
        """Evaluate one candidate

        Args:
            x: Candidate, length D

        Returns:
            Minimized objective value

        Raises:
            DimensionMismatch: If len(x) != D
            BudgetExhausted: If the budget is already spent
        """
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.problem.dim:
            raise DimensionMismatch(
                f"Expected a vector of length {self.problem.dim}, got {x.shape[0]}"
            )
        if self.used >= self.budget:
            raise BudgetExhausted(
                f"Budget of {self.budget} evaluations on {self.problem.name!r} is exhausted"
            )
        x = self.problem.clip(x)
        value = self.problem.value(x)
        if not np.isfinite(value):
            logger.debug("Non-finite value on %s replaced by float max", self.problem.name)
            value = _NON_FINITE_SUBSTITUTE
        self.used += 1
        if value < self.best_value:
            self.best_value = value
            self.best_x = x.copy()
        self._trace.append(TraceEntry(self.used, value, self.best_value))
        if self.ledger is not None:
            self.ledger.charge(self.phase, self.kind)
        return value

    __call__ = evaluate
