"""Run directory layout and the artifact manifest

A run directory is `<out>/<problem>/seed-<seed>/`. Every file a command
writes is listed in `manifest.json` with the producing command and the
hash of the settings it depends on.
"""

import json
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..core.errors import ArtifactMissing

MANIFEST = "manifest.json"
LOG_FILE = "pipeline.log"


def write_json(path: Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def read_json(path: Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise ArtifactMissing(f"Missing artifact {path}")
    return json.loads(path.read_text(encoding="utf-8"))


class RunLayout:
    """Paths of every artifact of one (problem, seed) run directory"""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)

    def ensure(self) -> "RunLayout":
        self.root.mkdir(parents=True, exist_ok=True)
        return self

    @property
    def log_file(self) -> Path:
        return self.root / LOG_FILE

    @property
    def manifest_file(self) -> Path:
        return self.root / MANIFEST

    def ela(self, h: str) -> Path:
        return self.root / f"ela-{h}.json"

    def design(self, h: str) -> Path:
        return self.root / f"ela-{h}.design.npy"

    def pool(self, h: str) -> Path:
        return self.root / f"ela-{h}.pool.json"

    def proxies(self, h: str) -> Path:
        return self.root / f"proxies-{h}.json"

    def gp_curve(self, h: str) -> Path:
        return self.root / f"proxies-{h}.curve.csv"

    def champion(self, condition: str, h: str) -> Path:
        return self.root / f"discover-{condition}-{h}.champion.json"

    def history(self, condition: str, h: str) -> Path:
        return self.root / f"discover-{condition}-{h}.history.jsonl"

    def report(self, condition: str, h: str) -> Path:
        return self.root / f"validate-{condition}-{h}.report.json"

    def validation_runs(self, condition: str, h: str) -> Path:
        return self.root / f"validate-{condition}-{h}"

    def spectrum(self, condition: str, h: str) -> Path:
        return self.root / f"validate-{condition}-{h}.spectrum.csv"

    def baseline_runs(self, h: str) -> Path:
        return self.root / f"baseline-{h}"

    def baseline_summary(self, h: str) -> Path:
        return self.root / f"baseline-{h}.summary.json"

    def require(self, path: Path, command: str) -> Path:
        """Path of an input artifact, which must exist

        Raises:
            ArtifactMissing: Naming the command that produces it
        """
        if not Path(path).exists():
            raise ArtifactMissing(f"Missing {Path(path).name}; run `proxyforge {command}` first")
        return Path(path)

    def save_design(self, h: str, X: np.ndarray) -> Path:
        path = self.design(h)
        np.save(path, np.asarray(X, dtype=float), allow_pickle=False)
        return path

    def load_design(self, h: str) -> np.ndarray:
        return np.load(self.require(self.design(h), "ela"), allow_pickle=False)

    def record(self, paths: List[Path], command: str, config_hash: str) -> None:
        """Add artifacts to the manifest, replacing older entries for the same paths"""
        manifest = self.read_manifest()
        entries: Dict[str, Dict[str, str]] = {e["path"]: e for e in manifest["artifacts"]}
        for path in paths:
            rel = Path(path).relative_to(self.root).as_posix()
            entries[rel] = {"path": rel, "command": command, "config_hash": config_hash}
        manifest["artifacts"] = [entries[key] for key in sorted(entries)]
        write_json(self.manifest_file, manifest)

    def read_manifest(self) -> Dict[str, Any]:
        if not self.manifest_file.exists():
            return {"artifacts": []}
        return json.loads(self.manifest_file.read_text(encoding="utf-8"))
