"""Proxy-driven algorithm discovery and validation"""

from .discovery import DiscoveryResult, champions, discover, discover_sessions
from .llm import (
    LLMSettings,
    ProposerRequest,
    ProposerResponse,
    extract_json,
    llm_propose,
    parse_reply,
    task_description,
)
from .proposers import IdentityProposer, LLMProposer, OfflineProposer, Proposer, make_proposer
from .scoring import rank_by_distance, score_candidate, select_proxies
from .session import Condition, DiscoverySession, HistoryEntry, read_history_jsonl
from .stub_server import StubLLMServer
from .validation import AlgorithmRuns, ValidationReport, run_baselines, validate

__all__ = [
    "AlgorithmRuns",
    "Condition",
    "DiscoveryResult",
    "DiscoverySession",
    "HistoryEntry",
    "IdentityProposer",
    "LLMProposer",
    "LLMSettings",
    "OfflineProposer",
    "Proposer",
    "ProposerRequest",
    "ProposerResponse",
    "StubLLMServer",
    "ValidationReport",
    "champions",
    "discover",
    "discover_sessions",
    "extract_json",
    "llm_propose",
    "make_proposer",
    "parse_reply",
    "rank_by_distance",
    "read_history_jsonl",
    "run_baselines",
    "score_candidate",
    "select_proxies",
    "task_description",
    "validate",
]
