"""Small-budget validation of champions on the real problem"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..algospace.baselines import baseline_configs
from ..algospace.config import AlgorithmConfig
from ..algospace.engine import run
from ..core.budget import BudgetedEvaluator, BudgetLedger, EvalKind, Phase
from ..core.problem import ProblemSpec
from ..core.records import RunRecord
from ..core.rng import RandomStream
from .session import DEFAULT_BUDGET_FACTOR

logger = logging.getLogger(__name__)

DEFAULT_RUNS = 10


@dataclass
class AlgorithmRuns:
    """Repeated runs of one algorithm on the target"""

    label: str
    config: AlgorithmConfig
    records: List[RunRecord] = field(default_factory=list)

    @property
    def aocc(self) -> List[float]:
        return [float(r.aocc) for r in self.records if r.aocc is not None]

    @property
    def best_record(self) -> RunRecord:
        return min(self.records, key=lambda r: (r.best_value, r.seed))

    def summary(self) -> Dict[str, Any]:
        scores = np.asarray(self.aocc)
        q1, median, q3 = np.percentile(scores, [25, 50, 75]) if scores.size else (None, None, None)
        best = self.best_record
        return {
            "label": self.label,
            "config": self.config.to_dict(),
            "aocc": self.aocc,
            "aocc_median": None if median is None else float(median),
            "aocc_iqr": None if median is None else float(q3 - q1),
            "best_value": best.best_value,
            "best_x": best.best_x,
            "seeds": [r.seed for r in self.records],
        }


@dataclass
class ValidationReport:
    """Champions and optional baselines validated on one target"""

    target: str
    budget: int
    runs: int
    champions: List[AlgorithmRuns]
    ledger: BudgetLedger
    direct_equivalent_evals: Optional[int] = None
    baselines: List[AlgorithmRuns] = field(default_factory=list)

    @property
    def h2_ratio(self) -> Optional[float]:
        if self.direct_equivalent_evals is None:
            return None
        return self.ledger.h2_ratio(self.direct_equivalent_evals)

    @property
    def best(self) -> AlgorithmRuns:
        return max(self.champions, key=lambda c: float(np.median(c.aocc)) if c.aocc else -1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "budget": self.budget,
            "runs": self.runs,
            "champions": [c.summary() for c in self.champions],
            "baselines": [b.summary() for b in self.baselines],
            "ledger": self.ledger.to_dict(),
            "direct_equivalent_evals": self.direct_equivalent_evals,
            "h2_ratio": self.h2_ratio,
        }

    def write_json(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return path


def repeated_runs(
    label: str,
    config: AlgorithmConfig,
    target: ProblemSpec,
    budget: int,
    runs: int,
    rng: RandomStream,
    ledger: BudgetLedger,
    phase: Phase,
) -> AlgorithmRuns:
    """`runs` seeded runs of config on target, charged to ledger"""
    result = AlgorithmRuns(label, config)
    for r in range(runs):
        seed = rng.child(r).draw_seed()
        evaluator = BudgetedEvaluator(target, budget, ledger, phase, EvalKind.TARGET)
        record = run(config, evaluator, seed)
        record.label = label
        result.records.append(record)
    logger.info("%s on %s: median AOCC %.4f", label, target.name, float(np.median(result.aocc)))
    return result


def validate(
    champions: Sequence[AlgorithmConfig],
    target: ProblemSpec,
    budget: Optional[int] = None,
    runs: int = DEFAULT_RUNS,
    seed: int = 0,
    ledger: Optional[BudgetLedger] = None,
    direct_equivalent_evals: Optional[int] = None,
    label_prefix: str = "",
) -> ValidationReport:
    """Run every champion `runs` times on the real target

    Args:
        champions: Configs to validate
        target: Real problem
        budget: Evaluations per run, 50 x D when None
        runs: Seeded repetitions per champion
        seed: Validation seed
        ledger: Ledger of the whole pipeline; a fresh one when None
        direct_equivalent_evals: Target cost of direct discovery, for H2
        label_prefix: Prepended to the champion-<i> labels

    Returns:
        ValidationReport

    Raises:
        ValueError: If champions is empty or runs < 1
    """
    if not champions:
        raise ValueError("validate() needs at least one champion")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    budget = budget or DEFAULT_BUDGET_FACTOR * target.dim
    ledger = ledger if ledger is not None else BudgetLedger()
    rng = RandomStream(seed)
    results = [
        repeated_runs(f"{label_prefix}champion-{i}", config, target, budget, runs, rng.child(0, i), ledger, Phase.VALIDATION)
        for i, config in enumerate(champions)
    ]
    return ValidationReport(target.name, budget, runs, results, ledger, direct_equivalent_evals)


def run_baselines(
    target: ProblemSpec,
    budget: Optional[int] = None,
    runs: int = DEFAULT_RUNS,
    seed: int = 0,
    ledger: Optional[BudgetLedger] = None,
) -> List[AlgorithmRuns]:
    """RS, DE and LSHADE on the target, charged to the baseline phase"""
    budget = budget or DEFAULT_BUDGET_FACTOR * target.dim
    ledger = ledger if ledger is not None else BudgetLedger()
    rng = RandomStream(seed)
    return [
        repeated_runs(label, config, target, budget, runs, rng.child(1, i), ledger, Phase.BASELINE)
        for i, (label, config) in enumerate(baseline_configs(target.dim, budget).items())
    ]
