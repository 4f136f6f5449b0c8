"""The (1+1) discovery loop over AlgorithmConfigs"""

import json
import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence

from ..algospace.config import AlgorithmConfig
from ..core.errors import MalformedResponse, ProposerUnavailable
from ..core.rng import RandomStream
from .llm import ProposerRequest, task_description
from .proposers import OfflineProposer, Proposer
from .scoring import score_candidate
from .session import DiscoverySession, HistoryEntry

logger = logging.getLogger(__name__)

N_CHAMPIONS = 3

_SCORE_STREAM = 0
_PROPOSAL_STREAM = 1
_FALLBACK_STREAM = 2


@dataclass
class DiscoveryResult:
    """Champion of a session with its full history"""

    champion: AlgorithmConfig
    champion_score: float
    history: List[HistoryEntry]
    session: DiscoverySession

    def champions(self, n: int = N_CHAMPIONS) -> List[AlgorithmConfig]:
        return champions(self.champion, self.history, n)


def _config_key(config_dict: dict) -> str:
    return json.dumps(config_dict, sort_keys=True)


def champions(incumbent: AlgorithmConfig, history: Sequence[HistoryEntry], n: int = N_CHAMPIONS) -> List[AlgorithmConfig]:
    """The incumbent plus the best distinct configs seen in history

    Ties in score go to the earlier iteration.
    """
    selected = [incumbent]
    seen = {_config_key(incumbent.to_dict())}
    for entry in sorted(history, key=lambda e: (-e.score, e.iteration)):
        if len(selected) >= n:
            break
        key = _config_key(entry.config)
        if key in seen:
            continue
        seen.add(key)
        selected.append(AlgorithmConfig.from_dict(entry.config))
    return selected


def discover(session: DiscoverySession, proposer: Proposer) -> DiscoveryResult:
    """Run a fresh session to completion

    Every candidate is scored with the same seed stream, so equal configs
    get equal scores. A candidate replaces the incumbent when its score is
    not lower. Proposer failures are replaced by an offline mutation.

    Args:
        session: Fresh session
        proposer: Source of candidates

    Returns:
        DiscoveryResult with the final incumbent

    Raises:
        ValueError: If the session already ran
        InvalidConfig: If the initial config is invalid
    """
    if not session.is_fresh:
        raise ValueError("discover() needs a fresh session")
    rng = RandomStream(session.seed)
    score_stream = rng.child(_SCORE_STREAM)
    fallback = OfflineProposer()
    task = task_description(session.target.dim, int(session.inner_budget))

    def score(config: AlgorithmConfig) -> float:
        return score_candidate(
            config,
            session.proxies,
            int(session.inner_budget),
            session.repetitions,
            score_stream,
            session.ledger,
            session.eval_kind,
            session.workers,
        )

    session.incumbent = session.initial_config.validate()
    session.incumbent_score = score(session.incumbent)
    session.history.append(
        HistoryEntry(0, session.incumbent.to_dict(), session.incumbent_score, True, session.incumbent_score, {"proposer": "initial"})
    )
    logger.info("Session %s: initial score %.6f", session.condition.value, session.incumbent_score)

    for iteration in range(1, session.iterations + 1):
        request = ProposerRequest(
            task_description=task,
            incumbent_config=session.incumbent.to_dict(),
            incumbent_score=session.incumbent_score,
            recent_history=session.recent_history(),
        )
        metadata = {"proposer": proposer.name}
        try:
            response = proposer.propose(request, rng.child(_PROPOSAL_STREAM, iteration))
        except (ProposerUnavailable, MalformedResponse) as e:
            logger.warning("Iteration %d: proposer failed (%s), using offline mutation", iteration, e)
            metadata.update({"fallback": fallback.name, "error": type(e).__name__, "message": str(e)})
            response = fallback.propose(request, rng.child(_FALLBACK_STREAM, iteration))
        metadata["rationale"] = response.rationale

        candidate_score = score(response.config)
        accepted = candidate_score >= session.incumbent_score
        if accepted:
            session.incumbent = response.config
            session.incumbent_score = candidate_score
        session.history.append(
            HistoryEntry(
                iteration, response.config.to_dict(), candidate_score, accepted, session.incumbent_score, metadata
            )
        )
        logger.info(
            "Iteration %d: %s scored %.6f (%s), incumbent %.6f",
            iteration,
            response.config.label,
            candidate_score,
            "accepted" if accepted else "rejected",
            session.incumbent_score,
        )

    return DiscoveryResult(session.incumbent, session.incumbent_score, session.history, session)


def discover_sessions(
    make_session: Callable[[int], DiscoverySession], proposer: Proposer, sessions: int = 1
) -> List[DiscoveryResult]:
    """Run independent sessions, best champion first

    Args:
        make_session: Builds the session of a given index
        proposer: Shared proposer
        sessions: Number of sessions

    Returns:
        Results sorted by champion score, descending; ties keep session order
    """
    if sessions < 1:
        raise ValueError("sessions must be >= 1")
    results = [discover(make_session(index), proposer) for index in range(sessions)]
    return sorted(results, key=lambda r: -r.champion_score)
