"""Chat-completion client proposing AlgorithmConfigs

One HTTP POST per attempt with body {model, messages}. The reply's first
syntactically valid JSON object is read as the proposed configuration,
either bare or wrapped as {"config": ..., "rationale": ...}.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import requests

from ..algospace.config import AlgorithmConfig, json_schema
from ..core.errors import InvalidConfig, MalformedResponse, ProposerUnavailable

logger = logging.getLogger(__name__)

DEFAULT_CREDENTIAL_ENV = "PROXYFORGE_LLM_KEY"
DEFAULT_TIMEOUT = 60.0
DEFAULT_RETRIES = 3

TASK_DESCRIPTION = (
    "The optimization algorithm should handle a wide range of tasks, which is evaluated "
    "on the similar problems of a real-world problem. Your task is to configure a modular "
    "differential evolution algorithm that minimizes a black-box function within a budget "
    "of {budget} evaluations in {dim} dimensions. The configuration is scored by the area "
    "over its convergence curve on those similar problems (higher is better). Answer with "
    "one JSON object {{\"config\": <configuration>, \"rationale\": <one line with the main "
    "idea>}} where the configuration follows this JSON schema:\n{schema}"
)

_AUTH_FAILURES = (401, 403)


@dataclass
class ProposerRequest:
    """What the designer tells a proposer

    Attributes:
        task_description: Task framing sent as the system message
        incumbent_config: Incumbent as a dict
        incumbent_score: Incumbent mean AOCC
        recent_history: Last designer iterations
        schema: AlgorithmConfig JSON schema
    """

    task_description: str
    incumbent_config: Dict[str, Any]
    incumbent_score: float
    recent_history: List[Dict[str, Any]] = field(default_factory=list)
    schema: Dict[str, Any] = field(default_factory=json_schema)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "task_description": self.task_description,
            "incumbent_config": self.incumbent_config,
            "incumbent_score": self.incumbent_score,
            "recent_history": self.recent_history,
            "schema": self.schema,
        }


@dataclass
class ProposerResponse:
    config: AlgorithmConfig
    rationale: str = ""


@dataclass
class LLMSettings:
    """Transport settings of the language-model proposer"""

    endpoint: str = "http://127.0.0.1:8765/v1/chat/completions"
    model: str = "gpt-4o-2024-05-13"
    timeout: float = DEFAULT_TIMEOUT
    retries: int = DEFAULT_RETRIES
    credential_env: str = DEFAULT_CREDENTIAL_ENV

    def credentials(self) -> Optional[str]:
        return os.environ.get(self.credential_env)


def task_description(dim: int, budget: int) -> str:
    return TASK_DESCRIPTION.format(dim=dim, budget=budget, schema=json.dumps(json_schema(), sort_keys=True))


def build_messages(request: ProposerRequest) -> List[Dict[str, str]]:
    user = {
        "incumbent_config": request.incumbent_config,
        "incumbent_score": request.incumbent_score,
        "recent_history": request.recent_history,
    }
    return [
        {"role": "system", "content": request.task_description},
        {"role": "user", "content": json.dumps(user, sort_keys=True)},
    ]


def extract_json(text: str) -> Dict[str, Any]:
    """First syntactically valid JSON object embedded in text

    Raises:
        MalformedResponse: If text holds no JSON object
    """
    decoder = json.JSONDecoder()
    start = text.find("{")
    while start != -1:
        try:
            value, _ = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            start = text.find("{", start + 1)
            continue
        if isinstance(value, dict):
            return value
        start = text.find("{", start + 1)
    raise MalformedResponse("Reply contains no JSON object")


def parse_reply(text: str) -> ProposerResponse:
    """Read a proposal out of the assistant's reply

    Raises:
        MalformedResponse: If no JSON object is found or it violates the schema
    """
    payload = extract_json(text)
    rationale = ""
    if isinstance(payload.get("config"), dict):
        rationale = str(payload.get("rationale", ""))
        payload = payload["config"]
    try:
        config = AlgorithmConfig.from_dict(payload)
    except InvalidConfig as e:
        raise MalformedResponse(f"Proposed configuration violates the schema: {e}")
    return ProposerResponse(config, rationale)


def _reply_content(response: requests.Response) -> str:
    try:
        return response.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError):
        raise MalformedResponse("Response is not a chat completion")


def llm_propose(
    request: ProposerRequest,
    endpoint: str,
    credentials: Optional[str],
    model: str = LLMSettings.model,
    timeout: float = DEFAULT_TIMEOUT,
    retries: int = DEFAULT_RETRIES,
    session: Optional[requests.Session] = None,
) -> ProposerResponse:
    """Ask a chat-completion endpoint for the next configuration

    Network failures and malformed replies are retried; after `retries`
    attempts the last failure is raised.

    Args:
        request: Designer state
        endpoint: Full URL of the chat-completion endpoint
        credentials: Bearer token
        model: Model name
        timeout: Seconds per attempt
        retries: Attempts before giving up
        session: Optional requests session

    Returns:
        Parsed ProposerResponse

    Raises:
        ProposerUnavailable: On missing credentials, auth failure or
            persistent network errors
        MalformedResponse: If every reply lacked a valid configuration
    """
    if not credentials:
        raise ProposerUnavailable("No credentials for the language-model endpoint")
    body = {"model": model, "messages": build_messages(request)}
    headers = {"Authorization": f"Bearer {credentials}", "Content-Type": "application/json"}
    http = session or requests
    last_error: Exception = ProposerUnavailable("No attempt made")
    for attempt in range(1, max(1, retries) + 1):
        try:
            response = http.post(endpoint, json=body, headers=headers, timeout=timeout)
        except requests.RequestException as e:
            last_error = ProposerUnavailable(f"Request to {endpoint} failed: {e}")
            logger.info("Proposer attempt %d/%d: %s", attempt, retries, last_error)
            continue
        if response.status_code in _AUTH_FAILURES:
            raise ProposerUnavailable(f"Endpoint refused credentials ({response.status_code})")
        if response.status_code != 200:
            last_error = ProposerUnavailable(f"Endpoint returned HTTP {response.status_code}")
            logger.info("Proposer attempt %d/%d: %s", attempt, retries, last_error)
            continue
        try:
            return parse_reply(_reply_content(response))
        except MalformedResponse as e:
            last_error = e
            logger.info("Proposer attempt %d/%d: %s", attempt, retries, e)
    raise last_error
