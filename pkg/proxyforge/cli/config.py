"""Pipeline configuration

Defaults reproduce the experimental settings of the method. A YAML file
with sections overrides them, and command-line flags override the file.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from ..core.errors import InvalidConfig, UnknownProblem
from ..designer.llm import DEFAULT_CREDENTIAL_ENV, DEFAULT_RETRIES, DEFAULT_TIMEOUT, LLMSettings
from ..designer.session import Condition
from ..gpgen.evolve import GPParams
from ..problems.registry import ProblemRegistry

HASH_LENGTH = 12
DEFAULTS_FILE = Path(__file__).parent / "defaults.yaml"

# settings that never change an artifact
_NON_SEMANTIC = {"workers", "credential_env", "timeout"}


@dataclass
class ElaSettings:
    """Landscape characterization

    Attributes:
        coef_ela: Design size per dimension
        rate_ela: Subsample rate
        n_ela: Subsamples per distribution
        threshold_corr: Correlation pruning threshold
        feature_sets: Feature sets to compute, all when None
        workers: Threads for feature computation
    """

    coef_ela: int = 150
    rate_ela: float = 0.8
    n_ela: int = 5
    threshold_corr: float = 0.9
    feature_sets: Optional[List[str]] = None
    workers: int = 1


@dataclass
class GPSettings:
    n_pop: int = 50
    n_gen: int = 50
    p_c: float = 0.5
    p_m: float = 0.1
    tournament_k: int = 3
    min_depth: int = 3
    max_depth: int = 12
    k: int = 3
    use_rand: bool = True
    constant_range: List[float] = field(default_factory=lambda: [-10.0, 10.0])
    workers: int = 1

    def to_params(self) -> GPParams:
        return GPParams(
            n_pop=self.n_pop,
            n_gen=self.n_gen,
            p_c=self.p_c,
            p_m=self.p_m,
            tournament_k=self.tournament_k,
            min_depth=self.min_depth,
            max_depth=self.max_depth,
            k=self.k,
            use_rand=self.use_rand,
            constant_range=(float(self.constant_range[0]), float(self.constant_range[1])),
            workers=self.workers,
        )


@dataclass
class DesignerSettings:
    """Discovery loop and proposer transport"""

    condition: str = Condition.PROXY_DRIVEN.value
    iterations: int = 100
    repetitions: int = 3
    sessions: int = 1
    proposer: str = "offline"
    endpoint: str = LLMSettings.endpoint
    model: str = LLMSettings.model
    timeout: float = DEFAULT_TIMEOUT
    retries: int = DEFAULT_RETRIES
    credential_env: str = DEFAULT_CREDENTIAL_ENV
    workers: int = 1

    def llm_settings(self) -> LLMSettings:
        return LLMSettings(self.endpoint, self.model, self.timeout, self.retries, self.credential_env)


@dataclass
class ValidationSettings:
    runs: int = 10
    champions: int = 3
    with_baselines: bool = False


@dataclass
class AoccSettings:
    """Budget and AOCC normalization

    Attributes:
        budget_factor: Evaluations per dimension of every run
        clip_range: Overrides the problem's clip bounds when set
    """

    budget_factor: int = 50
    clip_range: Optional[List[float]] = None


_SECTIONS = {
    "ela": ElaSettings,
    "gp": GPSettings,
    "designer": DesignerSettings,
    "validation": ValidationSettings,
    "aocc": AoccSettings,
}


@dataclass
class PipelineConfig:
    """Complete configuration of a pipeline run"""

    problem: str = "mini-bragg"
    master_seed: int = 0
    out: str = "runs"
    ela: ElaSettings = field(default_factory=ElaSettings)
    gp: GPSettings = field(default_factory=GPSettings)
    designer: DesignerSettings = field(default_factory=DesignerSettings)
    validation: ValidationSettings = field(default_factory=ValidationSettings)
    aocc: AoccSettings = field(default_factory=AoccSettings)

    @property
    def condition(self) -> Condition:
        try:
            return Condition(self.designer.condition)
        except ValueError:
            raise InvalidConfig(f"Unknown condition {self.designer.condition!r}")

    def budget(self, dim: int) -> int:
        return self.aocc.budget_factor * dim

    def run_dir(self) -> Path:
        return Path(self.out) / self.problem.replace(":", "_") / f"seed-{self.master_seed}"

    def validate(self) -> "PipelineConfig":
        """Check settings before any stage runs

        Raises:
            UnknownProblem: If the problem is not registered
            InvalidConfig: On settings no stage could run with
        """
        if not ProblemRegistry().is_registered(self.problem):
            raise UnknownProblem(f"Unknown problem: {self.problem!r}")
        _ = self.condition
        if self.designer.proposer not in ("offline", "identity", "llm"):
            raise InvalidConfig(f"Unknown proposer {self.designer.proposer!r}")
        if self.master_seed < 0:
            raise InvalidConfig("master_seed must be >= 0")
        if self.aocc.budget_factor < 1:
            raise InvalidConfig("aocc.budget_factor must be >= 1")
        if self.validation.runs < 1 or self.validation.champions < 1:
            raise InvalidConfig("validation.runs and validation.champions must be >= 1")
        if self.designer.iterations < 0 or self.designer.repetitions < 1 or self.designer.sessions < 1:
            raise InvalidConfig("designer iterations >= 0, repetitions >= 1 and sessions >= 1 are required")
        if not 0.0 < self.ela.rate_ela <= 1.0 or self.ela.n_ela < 2 or self.ela.coef_ela < 1:
            raise InvalidConfig("ELA settings need coef_ela >= 1, 0 < rate_ela <= 1 and n_ela >= 2")
        try:
            self.gp.to_params().validate()
        except ValueError as e:
            raise InvalidConfig(f"GP settings: {e}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        """Build from a nested dict; unknown keys are rejected

        Raises:
            InvalidConfig: On unknown sections or keys
        """
        data = dict(data or {})
        config = cls()
        top = {f.name for f in fields(cls)} - set(_SECTIONS)
        for key, value in data.items():
            if key in _SECTIONS:
                if value is None:
                    continue
                if not isinstance(value, dict):
                    raise InvalidConfig(f"Section {key!r} must be a mapping")
                setattr(config, key, _build_section(key, value))
            elif key in top:
                setattr(config, key, value)
            else:
                raise InvalidConfig(f"Unknown configuration key {key!r}")
        return config


def _build_section(name: str, values: Dict[str, Any]):
    section_type = _SECTIONS[name]
    known = {f.name for f in fields(section_type)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise InvalidConfig(f"Unknown keys in section {name!r}: {unknown}")
    return section_type(**values)


def load_from_yaml(path: Path) -> PipelineConfig:
    """Load a configuration file

    Args:
        path: YAML file with top-level keys and sections

    Returns:
        PipelineConfig with defaults for everything the file omits

    Raises:
        InvalidConfig: If the file is unreadable, not a mapping, or has unknown keys
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise InvalidConfig(f"Cannot read configuration {path}: {e}")
    except yaml.YAMLError as e:
        raise InvalidConfig(f"Invalid YAML in {path}: {e}")
    if data is not None and not isinstance(data, dict):
        raise InvalidConfig(f"Configuration {path} must be a mapping")
    return PipelineConfig.from_dict(data or {})


def apply_cli(config: PipelineConfig, args: Any) -> PipelineConfig:
    """Override config with the flags present on the command line"""
    if getattr(args, "seed", None) is not None:
        config.master_seed = args.seed
    if getattr(args, "problem", None) is not None:
        config.problem = args.problem
    if getattr(args, "condition", None) is not None:
        config.designer.condition = args.condition
    if getattr(args, "with_baselines", False):
        config.validation.with_baselines = True
    if getattr(args, "out", None) is not None:
        config.out = str(args.out)
    return config


def stage_hash(payload: Dict[str, Any]) -> str:
    """Short SHA-256 digest of the canonical JSON of payload"""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:HASH_LENGTH]


def _semantic(settings: Any) -> Dict[str, Any]:
    return {k: v for k, v in asdict(settings).items() if k not in _NON_SEMANTIC}


def ela_hash(config: PipelineConfig) -> str:
    return stage_hash({"problem": config.problem, "seed": config.master_seed, "ela": _semantic(config.ela)})


def proxies_hash(config: PipelineConfig) -> str:
    return stage_hash({"ela": ela_hash(config), "gp": _semantic(config.gp)})


def discovery_hash(config: PipelineConfig) -> str:
    designer = _semantic(config.designer)
    if config.designer.proposer != "llm":
        for key in ("endpoint", "model", "retries"):
            designer.pop(key)
    return stage_hash(
        {"proxies": proxies_hash(config), "designer": designer, "aocc": asdict(config.aocc)}
    )


def validation_hash(config: PipelineConfig) -> str:
    return stage_hash({"discovery": discovery_hash(config), "validation": asdict(config.validation)})


def baseline_hash(config: PipelineConfig) -> str:
    return stage_hash(
        {
            "problem": config.problem,
            "seed": config.master_seed,
            "runs": config.validation.runs,
            "aocc": asdict(config.aocc),
        }
    )


def clip_override(config: PipelineConfig) -> Optional[Tuple[float, float]]:
    if config.aocc.clip_range is None:
        return None
    lo, hi = config.aocc.clip_range
    return float(lo), float(hi)
