"""Tests for the report tables and the run-directory layout"""

import csv
import json

import numpy as np
import pytest

from proxyforge.cli.artifacts import RunLayout, read_json, write_json
from proxyforge.cli.report import DISTANCE_HEADER, SUMMARY_HEADER, cmd_report, collect_records
from proxyforge.core.errors import ArtifactMissing
from proxyforge.core.records import RunRecord


def write_record(path, problem: str, label: str, seed: int, aocc, budget: int = 4) -> None:
    trace = [(t, 1.0 / t, 1.0 / t) for t in range(1, budget + 1)]
    record = RunRecord(problem, label, {"family": "RS"}, seed, budget, trace=trace, aocc=aocc, optimum=0.0)
    path.parent.mkdir(parents=True, exist_ok=True)
    record.write_json(path)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


class TestCollectRecords:
    """Test suite for record discovery"""

    def test_skips_records_without_aocc(self, tmp_path):
        """Test that records lacking AOCC are counted and left out"""
        write_record(tmp_path / "a" / "r1.json", "p", "RS", 1, 0.5)
        write_record(tmp_path / "a" / "r2.json", "p", "RS", 2, None)
        records, skipped = collect_records(tmp_path)
        assert len(records) == 1
        assert skipped == 1

    def test_duplicates_counted_once(self, tmp_path):
        """Test that the same (problem, label, seed) in two places counts once"""
        write_record(tmp_path / "a" / "r1.json", "p", "RS", 1, 0.5)
        write_record(tmp_path / "b" / "r1.json", "p", "RS", 1, 0.5)
        records, _ = collect_records(tmp_path)
        assert len(records) == 1

    def test_other_json_ignored(self, tmp_path):
        """Test that manifests and summaries are not records"""
        write_json(tmp_path / "manifest.json", {"artifacts": []})
        (tmp_path / "broken.json").write_text("{", encoding="utf-8")
        write_record(tmp_path / "r.json", "p", "DE", 0, 0.2)
        records, skipped = collect_records(tmp_path)
        assert [r.label for r in records] == ["DE"]
        assert skipped == 0


class TestReport:
    """Test suite for cmd_report"""

    def test_summary_sorted_with_quartiles(self, tmp_path, capsys):
        """Test rows sorted by problem and algorithm with median and IQR"""
        for seed, score in enumerate([0.1, 0.2, 0.3, 0.4, 0.5]):
            write_record(tmp_path / "runs" / f"lshade-{seed}.json", "q", "LSHADE", seed, score)
        write_record(tmp_path / "runs" / "de.json", "q", "DE", 0, 0.7)
        write_record(tmp_path / "runs" / "rs.json", "p", "RS", 0, 0.9)
        write_record(tmp_path / "runs" / "bad.json", "p", "RS", 1, None)

        cmd_report(tmp_path)
        rows = read_csv(tmp_path / "aocc_summary.csv")
        assert rows[0] == SUMMARY_HEADER
        assert [(r[0], r[1]) for r in rows[1:]] == [("p", "RS"), ("q", "DE"), ("q", "LSHADE")]
        lshade = rows[3]
        assert int(lshade[2]) == 5
        assert float(lshade[3]) == pytest.approx(0.3)
        assert float(lshade[6]) == pytest.approx(0.2)

        out = capsys.readouterr().out
        assert "Records: 7" in out
        assert "Skipped records: 1" in out
        assert "AOCC: log10(best - optimum) clipped to [1e-08, 100]" in out

    def test_curves_per_problem(self, tmp_path):
        """Test one curve file per problem with a column per algorithm"""
        write_record(tmp_path / "a.json", "synthetic:sphere:2", "DE", 0, 0.5)
        write_record(tmp_path / "b.json", "synthetic:sphere:2", "RS", 0, 0.4)
        cmd_report(tmp_path)
        rows = read_csv(tmp_path / "curves-synthetic_sphere_2.csv")
        assert rows[0] == ["eval", "DE", "RS"]
        assert len(rows) == 1 + 4
        values = np.asarray([[float(v) for v in row[1:]] for row in rows[1:]])
        assert np.all((values >= 0.0) & (values <= 1.0))
        assert np.all(np.diff(values[:, 0]) <= 0.0)

    def test_distance_table(self, tmp_path):
        """Test mean proxy fitness against the nearest synthetic distances"""
        write_record(tmp_path / "r.json", "p", "DE", 0, 0.5)
        write_json(
            tmp_path / "ela-abc.pool.json",
            {"problem": "p", "distances": [["sphere", 0.2], ["ellipsoid", 0.4], ["rastrigin", 0.9]]},
        )
        write_json(
            tmp_path / "proxies-def.json",
            {"ela_hash": "abc", "proxies": [{"rank": 1, "tree": "sum(x)", "fitness": 0.1}, {"rank": 2, "tree": "max(x)", "fitness": 0.3}]},
        )
        cmd_report(tmp_path)
        rows = read_csv(tmp_path / "wasserstein_table.csv")
        assert rows[0] == DISTANCE_HEADER
        assert rows[1][0] == "p"
        assert float(rows[1][1]) == pytest.approx(0.2)
        assert float(rows[1][2]) == pytest.approx(0.3)

    def test_missing_directory(self, tmp_path):
        """Test that a missing directory raises ArtifactMissing"""
        with pytest.raises(ArtifactMissing):
            cmd_report(tmp_path / "nope")


class TestRunLayout:
    """Test suite for artifact paths and the manifest"""

    def test_manifest_replaces_entries(self, tmp_path):
        """Test that re-recording a path keeps one entry with the new hash"""
        layout = RunLayout(tmp_path).ensure()
        path = write_json(layout.ela("h1"), {})
        layout.record([path], "ela", "h1")
        layout.record([path], "ela", "h2")
        artifacts = layout.read_manifest()["artifacts"]
        assert artifacts == [{"path": "ela-h1.json", "command": "ela", "config_hash": "h2"}]

    def test_require_names_producer(self, tmp_path):
        """Test the missing-artifact message"""
        layout = RunLayout(tmp_path)
        with pytest.raises(ArtifactMissing, match="gen-proxies"):
            layout.require(layout.proxies("x"), "gen-proxies")
        with pytest.raises(ArtifactMissing):
            read_json(tmp_path / "absent.json")

    def test_design_round_trip(self, tmp_path):
        """Test that the design matrix is stored exactly"""
        layout = RunLayout(tmp_path).ensure()
        X = np.random.default_rng(0).uniform(size=(6, 2))
        layout.save_design("h", X)
        assert np.array_equal(layout.load_design("h"), X)

    def test_written_json_is_sorted(self, tmp_path):
        """Test canonical JSON output"""
        path = write_json(tmp_path / "x.json", {"b": 1, "a": 2})
        assert list(json.loads(path.read_text(encoding="utf-8"))) == ["a", "b"]
