"""Command-line surface of the proxyforge pipeline"""

from .commands import cmd_baseline, cmd_discover, cmd_ela, cmd_gen_proxies, cmd_validate
from .config import (
    AoccSettings,
    DesignerSettings,
    ElaSettings,
    GPSettings,
    PipelineConfig,
    ValidationSettings,
    apply_cli,
    load_from_yaml,
    stage_hash,
)
from .report import cmd_report

__all__ = [
    "AoccSettings",
    "DesignerSettings",
    "ElaSettings",
    "GPSettings",
    "PipelineConfig",
    "ValidationSettings",
    "apply_cli",
    "cmd_baseline",
    "cmd_discover",
    "cmd_ela",
    "cmd_gen_proxies",
    "cmd_report",
    "cmd_validate",
    "load_from_yaml",
    "stage_hash",
]
