"""Summary tables over a directory of run records"""

import csv
import json
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import ArtifactMissing
from ..core.metrics import convergence_curve
from ..core.records import RunRecord

logger = logging.getLogger(__name__)

SUMMARY_FILE = "aocc_summary.csv"
DISTANCE_FILE = "wasserstein_table.csv"
SUMMARY_HEADER = ["problem", "algorithm", "runs", "aocc_median", "aocc_q1", "aocc_q3", "aocc_iqr"]
DISTANCE_HEADER = ["problem", "proxy_distance", "synthetic_distance"]

_RECORD_KEYS = {"problem", "label", "trace", "budget"}


def collect_records(root: Path) -> Tuple[List[RunRecord], int]:
    """Every run record below root, and the number skipped for lacking AOCC

    Records repeated across stages (same problem, label and seed) count once.
    """
    records: Dict[Tuple[str, str, int], RunRecord] = {}
    skipped = 0
    for path in sorted(Path(root).rglob("*.json")):
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            continue
        if not isinstance(data, dict) or not _RECORD_KEYS <= set(data):
            continue
        if data.get("aocc") is None:
            skipped += 1
            continue
        record = RunRecord.from_dict(data)
        records.setdefault((record.problem, record.label, record.seed), record)
    return list(records.values()), skipped


def _group(records: List[RunRecord]) -> Dict[Tuple[str, str], List[RunRecord]]:
    groups: Dict[Tuple[str, str], List[RunRecord]] = defaultdict(list)
    for record in records:
        groups[(record.problem, record.label)].append(record)
    return groups


def write_aocc_summary(records: List[RunRecord], path: Path) -> Path:
    """AOCC median and quartiles per (problem, algorithm), sorted by both"""
    groups = _group(records)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_HEADER)
        for (problem, label) in sorted(groups):
            scores = np.asarray([r.aocc for r in groups[(problem, label)]], dtype=float)
            q1, median, q3 = np.percentile(scores, [25, 50, 75])
            writer.writerow([problem, label, scores.size, repr(float(median)), repr(float(q1)), repr(float(q3)), repr(float(q3 - q1))])
    return path


def write_curves(records: List[RunRecord], root: Path) -> List[Path]:
    """Mean normalized best-so-far curve per algorithm, one file per problem"""
    by_problem: Dict[str, Dict[str, List[RunRecord]]] = defaultdict(dict)
    for (problem, label), group in _group(records).items():
        by_problem[problem][label] = group
    paths = []
    for problem in sorted(by_problem):
        groups = by_problem[problem]
        labels = sorted(groups)
        budget = max(r.budget for group in groups.values() for r in group)
        columns = []
        for label in labels:
            group = groups[label]
            columns.append(
                convergence_curve([r.best_so_far for r in group], budget, tuple(group[0].clip_range), group[0].optimum)
            )
        path = Path(root) / f"curves-{problem.replace(':', '_')}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["eval"] + labels)
            for t in range(budget):
                writer.writerow([t + 1] + [repr(float(column[t])) for column in columns])
        paths.append(path)
    return paths


def write_distance_table(root: Path, path: Path) -> Path:
    """Mean landscape distance of the evolved proxies and of the nearest synthetics

    Per problem, the proxy column averages the fitness of the extracted
    proxies; the synthetic column averages the distances of as many
    nearest synthetic instances from the same characterization.
    """
    rows: Dict[str, Tuple[List[float], List[float]]] = defaultdict(lambda: ([], []))
    for manifest_path in sorted(Path(root).rglob("proxies-*.json")):
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        fitness = [float(entry["fitness"]) for entry in manifest.get("proxies", [])]
        pool_path = manifest_path.parent / f"ela-{manifest.get('ela_hash')}.pool.json"
        if not fitness or not pool_path.exists():
            continue
        pool = json.loads(pool_path.read_text(encoding="utf-8"))
        synthetic = [float(d) for _, d in pool["distances"][: len(fitness)]]
        if not synthetic:
            continue
        proxy_col, synthetic_col = rows[pool["problem"]]
        proxy_col.append(float(np.mean(fitness)))
        synthetic_col.append(float(np.mean(synthetic)))
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(DISTANCE_HEADER)
        for problem in sorted(rows):
            proxy_col, synthetic_col = rows[problem]
            writer.writerow([problem, repr(float(np.mean(proxy_col))), repr(float(np.mean(synthetic_col)))])
    return path


def cmd_report(run_dir: Path) -> List[Path]:
    """Aggregate every run record below run_dir

    Writes the AOCC summary, per-problem convergence curves and the
    landscape-distance table into run_dir.

    Raises:
        ArtifactMissing: If run_dir holds no usable record
    """
    root = Path(run_dir)
    if not root.is_dir():
        raise ArtifactMissing(f"Run directory {root} does not exist")
    records, skipped = collect_records(root)
    if skipped:
        logger.warning("Skipped %d records without AOCC", skipped)
    if not records:
        raise ArtifactMissing(f"No run records under {root}")
    paths = [write_aocc_summary(records, root / SUMMARY_FILE)]
    paths.extend(write_curves(records, root))
    paths.append(write_distance_table(root, root / DISTANCE_FILE))
    for path in paths:
        print(f"Generated: {path}")
    for lo, hi in sorted({tuple(r.clip_range) for r in records}):
        print(f"AOCC: log10(best - optimum) clipped to [{lo:g}, {hi:g}]")
    print(f"Records: {len(records)}")
    print(f"Skipped records: {skipped}")
    return paths
