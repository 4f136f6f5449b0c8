"""Proposers: where the designer's next candidate comes from"""

from typing import Optional

from ..algospace.config import AlgorithmConfig
from ..algospace.mutation import LARGE, SMALL, mutate_config
from ..core.rng import RandomStream
from .llm import LLMSettings, ProposerRequest, ProposerResponse, llm_propose

SMALL_STEP_PROBABILITY = 0.8


class Proposer:
    """Base proposer; subclasses implement propose"""

    name = "proposer"

    def propose(self, request: ProposerRequest, rng: RandomStream) -> ProposerResponse:
        raise NotImplementedError


class OfflineProposer(Proposer):
    """Random perturbation of the incumbent: mostly small steps, sometimes large"""

    name = "offline"

    def __init__(self, small_probability: float = SMALL_STEP_PROBABILITY) -> None:
        self.small_probability = small_probability

    def propose(self, request: ProposerRequest, rng: RandomStream) -> ProposerResponse:
        incumbent = AlgorithmConfig.from_dict(request.incumbent_config)
        step = SMALL if rng.coin(self.small_probability) else LARGE
        return ProposerResponse(mutate_config(incumbent, rng, step), f"offline {step} step")


class IdentityProposer(Proposer):
    """Always proposes the incumbent"""

    name = "identity"

    def propose(self, request: ProposerRequest, rng: RandomStream) -> ProposerResponse:
        return ProposerResponse(AlgorithmConfig.from_dict(request.incumbent_config), "identity")


class LLMProposer(Proposer):
    """Language-model proposer over HTTP"""

    name = "llm"

    def __init__(self, settings: Optional[LLMSettings] = None) -> None:
        self.settings = settings or LLMSettings()

    def propose(self, request: ProposerRequest, rng: RandomStream) -> ProposerResponse:
        s = self.settings
        return llm_propose(request, s.endpoint, s.credentials(), s.model, s.timeout, s.retries)


def make_proposer(kind: str, settings: Optional[LLMSettings] = None) -> Proposer:
    """Proposer by name: offline, identity or llm"""
    if kind == OfflineProposer.name:
        return OfflineProposer()
    if kind == IdentityProposer.name:
        return IdentityProposer()
    if kind == LLMProposer.name:
        return LLMProposer(settings)
    raise ValueError(f"Unknown proposer {kind!r}")
