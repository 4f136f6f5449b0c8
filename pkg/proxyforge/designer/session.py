"""Discovery sessions and their history"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..algospace.config import AlgorithmConfig
from ..core.budget import BudgetLedger, EvalKind
from ..core.problem import ProblemSpec

DEFAULT_ITERATIONS = 100
DEFAULT_REPETITIONS = 3
DEFAULT_BUDGET_FACTOR = 50
RECENT_HISTORY = 5


class Condition(Enum):
    """Where the designer gets its feedback from"""

    PROXY_DRIVEN = "proxy-driven"
    BENCHMARK_DRIVEN = "benchmark-driven"
    REAL_WORLD_DIRECT = "real-world-direct"

    @property
    def eval_kind(self) -> EvalKind:
        return EvalKind.TARGET if self is Condition.REAL_WORLD_DIRECT else EvalKind.PROXY


@dataclass
class HistoryEntry:
    """One designer iteration

    Attributes:
        iteration: 0 for the initial config, then 1..iterations
        config: Proposed config as a dict
        score: Mean AOCC of the proposal
        accepted: Whether the proposal became the incumbent
        incumbent_score: Incumbent score after this iteration
        metadata: Proposer name, rationale and fallback details
    """

    iteration: int
    config: Dict[str, Any]
    score: float
    accepted: bool
    incumbent_score: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "config": self.config,
            "score": self.score,
            "accepted": self.accepted,
            "incumbent_score": self.incumbent_score,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HistoryEntry":
        return cls(
            iteration=int(data["iteration"]),
            config=dict(data["config"]),
            score=float(data["score"]),
            accepted=bool(data["accepted"]),
            incumbent_score=float(data["incumbent_score"]),
            metadata=dict(data.get("metadata", {})),
        )


@dataclass
class DiscoverySession:
    """State of one (1+1) search over AlgorithmConfigs

    Attributes:
        condition: Feedback source
        target: The real problem; only its dimension reaches the designer
            outside the real-world-direct condition
        proxies: Problems the candidates are scored on
        iterations: Number of proposals
        inner_budget: Evaluations per scoring run, 50 x D when None
        repetitions: Scoring runs per proxy
        seed: Session seed
        initial_config: Starting incumbent
        ledger: Evaluation accounting
        workers: Threads for concurrent scoring runs
    """

    condition: Condition
    target: ProblemSpec
    proxies: List[ProblemSpec]
    iterations: int = DEFAULT_ITERATIONS
    inner_budget: Optional[int] = None
    repetitions: int = DEFAULT_REPETITIONS
    seed: int = 0
    initial_config: AlgorithmConfig = field(default_factory=AlgorithmConfig)
    ledger: BudgetLedger = field(default_factory=BudgetLedger)
    workers: int = 1
    incumbent: Optional[AlgorithmConfig] = None
    incumbent_score: Optional[float] = None
    history: List[HistoryEntry] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.inner_budget is None:
            self.inner_budget = DEFAULT_BUDGET_FACTOR * self.target.dim
        if not self.proxies:
            raise ValueError("A discovery session needs at least one proxy")
        if self.iterations < 0 or self.repetitions < 1 or self.inner_budget < 1:
            raise ValueError("iterations >= 0, repetitions >= 1 and inner_budget >= 1 are required")
        if any(p.dim != self.target.dim for p in self.proxies):
            raise ValueError("Proxies must share the target's dimension")

    @property
    def eval_kind(self) -> EvalKind:
        return self.condition.eval_kind

    @property
    def is_fresh(self) -> bool:
        return not self.history and self.incumbent is None

    @property
    def direct_equivalent_evals(self) -> int:
        """Target evaluations a direct-discovery run of this session would need"""
        return self.iterations * self.repetitions * int(self.inner_budget)

    def recent_history(self, n: int = RECENT_HISTORY) -> List[Dict[str, Any]]:
        return [
            {"iteration": e.iteration, "config": e.config, "score": e.score, "accepted": e.accepted}
            for e in self.history[-n:]
        ]

    def write_history_jsonl(self, path: Path) -> Path:
        """One JSON object per iteration"""
        path = Path(path)
        with open(path, "w", encoding="utf-8") as f:
            for entry in self.history:
                f.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
        return path


def read_history_jsonl(path: Path) -> List[HistoryEntry]:
    entries = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                entries.append(HistoryEntry.from_dict(json.loads(line)))
    return entries
