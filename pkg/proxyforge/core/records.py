"""RunRecord, the persistence unit of every optimizer run"""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .budget import BudgetedEvaluator, BudgetLedger
from .metrics import aocc
from .problem import DEFAULT_CLIP_RANGE

TRACE_CSV_HEADER = ["eval", "raw", "best"]


@dataclass
class RunRecord:
    """Outcome of one algorithm run on one problem

    Attributes:
        problem: Problem name
        label: Algorithm label (family or champion name)
        config: AlgorithmConfig as a dict
        seed: Run seed
        budget: Evaluation budget
        ledger: BudgetLedger counters as a dict
        trace: (evaluation, raw, best) triples
        aocc: AOCC of the best-so-far trace, None when not computed
        best_x: Best point found
        best_value: Best minimized value found
        clip_range: AOCC clip bounds used
        optimum: Reference optimum subtracted for AOCC
    """

    problem: str
    label: str
    config: Dict[str, Any]
    seed: int
    budget: int
    ledger: Dict[str, Any] = field(default_factory=dict)
    trace: List[Tuple[int, float, float]] = field(default_factory=list)
    aocc: Optional[float] = None
    best_x: List[float] = field(default_factory=list)
    best_value: Optional[float] = None
    clip_range: Tuple[float, float] = DEFAULT_CLIP_RANGE
    optimum: Optional[float] = None

    @classmethod
    def from_evaluator(
        cls,
        evaluator: BudgetedEvaluator,
        label: str,
        config: Dict[str, Any],
        seed: int,
        ledger: Optional[BudgetLedger] = None,
    ) -> "RunRecord":
        """Close a run: collect the evaluator's trace and compute AOCC"""
        problem = evaluator.problem
        trace = [(entry.evaluation, entry.raw, entry.best) for entry in evaluator.trace]
        score = None
        if trace:
            score = aocc(
                [best for _, _, best in trace],
                evaluator.budget,
                problem.clip_range[0],
                problem.clip_range[1],
                problem.known_optimum,
            )
        return cls(
            problem=problem.name,
            label=label,
            config=dict(config),
            seed=int(seed),
            budget=evaluator.budget,
            ledger=ledger.to_dict() if ledger is not None else {},
            trace=trace,
            aocc=score,
            best_x=[] if evaluator.best_x is None else [float(v) for v in evaluator.best_x],
            best_value=None if not trace else float(evaluator.best_value),
            clip_range=tuple(problem.clip_range),
            optimum=problem.known_optimum,
        )

    @property
    def best_so_far(self) -> np.ndarray:
        return np.array([best for _, _, best in self.trace], dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem,
            "label": self.label,
            "config": self.config,
            "seed": self.seed,
            "budget": self.budget,
            "ledger": self.ledger,
            "trace": [[int(t), float(raw), float(best)] for t, raw, best in self.trace],
            "aocc": self.aocc,
            "best_x": self.best_x,
            "best_value": self.best_value,
            "clip_range": list(self.clip_range),
            "optimum": self.optimum,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        return cls(
            problem=data["problem"],
            label=data.get("label", ""),
            config=data.get("config", {}),
            seed=int(data.get("seed", 0)),
            budget=int(data.get("budget", len(data.get("trace", [])))),
            ledger=data.get("ledger", {}),
            trace=[(int(t), float(raw), float(best)) for t, raw, best in data.get("trace", [])],
            aocc=data.get("aocc"),
            best_x=list(data.get("best_x", [])),
            best_value=data.get("best_value"),
            clip_range=tuple(data.get("clip_range", DEFAULT_CLIP_RANGE)),
            optimum=data.get("optimum"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def write_json(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path

    @classmethod
    def read_json(cls, path: Path) -> "RunRecord":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def write_trace_csv(self, path: Path) -> Path:
        """Write the convergence trace as CSV with header eval,raw,best"""
        path = Path(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(TRACE_CSV_HEADER)
            for t, raw, best in self.trace:
                writer.writerow([t, repr(float(raw)), repr(float(best))])
        return path
