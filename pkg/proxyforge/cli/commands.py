"""Pipeline stages behind the CLI subcommands

Each command reads the artifacts of earlier stages from the run
directory, writes its own, records them in the manifest and returns the
path of its primary artifact. Every stage draws from its own branch of
the master random stream, so stages can be re-run independently.
"""

import csv
import logging
from dataclasses import replace
from pathlib import Path
from typing import List, Tuple

import numpy as np

from ..algospace.baselines import de_baseline
from ..algospace.config import AlgorithmConfig
from ..core.budget import BudgetLedger, EvalKind, Phase
from ..core.errors import ArtifactMissing, DegenerateSample, NoValidCandidate
from ..core.problem import ProblemSpec
from ..core.rng import RandomStream
from ..designer.discovery import discover_sessions
from ..designer.proposers import make_proposer
from ..designer.scoring import rank_by_distance
from ..designer.session import Condition, DiscoverySession
from ..designer.validation import AlgorithmRuns, run_baselines, validate
from ..ela.distribution import FeatureDistribution, align_distributions, feature_distribution
from ..ela.sampling import sample_design
from ..gpgen.evolve import evolve, top_k
from ..gpgen.proxy import proxy_problem
from ..gpgen.serializer import parse_prefix
from ..problems.photonics import solution_spectrum
from ..problems.registry import ProblemRegistry
from .artifacts import RunLayout, read_json, write_json
from .config import (
    PipelineConfig,
    baseline_hash,
    clip_override,
    discovery_hash,
    ela_hash,
    proxies_hash,
    validation_hash,
)

logger = logging.getLogger(__name__)

# branches of the master stream
ELA_STREAM = 0
POOL_STREAM = 1
GP_STREAM = 2
DISCOVERY_STREAM = 3
VALIDATION_STREAM = 4
BASELINE_STREAM = 5

SPECTRUM_HEADER = ["wavelength_nm", "reflectance", "transmittance"]


def load_target(config: PipelineConfig) -> ProblemSpec:
    """Target problem of config, with the AOCC clip override applied

    Raises:
        UnknownProblem: If the name is not registered
    """
    problem = ProblemRegistry().get(config.problem, config.master_seed)
    clip = clip_override(config)
    return problem if clip is None else replace(problem, clip_range=clip)


def layout_for(config: PipelineConfig) -> RunLayout:
    return RunLayout(config.run_dir()).ensure()


def gp_stream(config: PipelineConfig) -> RandomStream:
    return RandomStream(config.master_seed).child(GP_STREAM)


def _safe(label: str) -> str:
    return label.replace(":", "_").replace("/", "_")


def cmd_ela(config: PipelineConfig) -> Path:
    """Characterize the target and the synthetic pool

    Writes the target's FeatureDistribution, its design matrix and the
    ranked landscape distances of the synthetic pool.

    Raises:
        UnknownProblem: If the problem is not registered
        DegenerateSample: If the target's design cannot be characterized
    """
    config.validate()
    target = load_target(config)
    layout = layout_for(config)
    h = ela_hash(config)
    ela = config.ela
    rng = RandomStream(config.master_seed)
    ledger = BudgetLedger()

    sample = sample_design(target, ela.coef_ela, rng.child(ELA_STREAM, 0), ledger)
    target_dist = feature_distribution(
        sample, ela.rate_ela, ela.n_ela, rng.child(ELA_STREAM, 1), ela.feature_sets, ela.coef_ela, ela.workers
    )

    pool: List[Tuple[str, FeatureDistribution]] = []
    for i, problem in enumerate(ProblemRegistry().synthetic_pool(target.dim, config.master_seed)):
        pool_sample = sample_design(problem, ela.coef_ela, rng.child(POOL_STREAM, i, 0), ledger, target=False)
        try:
            dist = feature_distribution(
                pool_sample, ela.rate_ela, ela.n_ela, rng.child(POOL_STREAM, i, 1), ela.feature_sets, ela.coef_ela, ela.workers
            )
        except DegenerateSample as e:
            logger.warning("Skipping %s: %s", problem.name, e)
            continue
        pool.append((problem.name, dist))

    aligned, retained = align_distributions([target_dist] + [dist for _, dist in pool], ela.threshold_corr)
    target_dist = aligned[0]
    distances = rank_by_distance(target_dist, [(name, dist) for (name, _), dist in zip(pool, aligned[1:])])

    ela_path = target_dist.write_json(layout.ela(h))
    design_path = layout.save_design(h, sample.X)
    pool_path = write_json(
        layout.pool(h),
        {
            "problem": target.name,
            "design_rows": sample.size,
            "retained": retained,
            "distances": [[name, distance] for name, distance in distances],
            "ledger": ledger.to_dict(),
        },
    )
    layout.record([ela_path, design_path, pool_path], "ela", h)
    for path in (ela_path, design_path, pool_path):
        print(f"Generated: {path}")
    print(f"Design rows: {sample.size}")
    print(f"Retained features: {len(retained)}")
    print(f"Target evaluations: {ledger.sample_evals}")
    return ela_path


def cmd_gen_proxies(config: PipelineConfig) -> Path:
    """Evolve proxy functions against the target distribution

    Raises:
        ArtifactMissing: If `ela` has not run
        NoValidCandidate: If GP produced no valid tree
    """
    config.validate()
    layout = layout_for(config)
    h_ela = ela_hash(config)
    h = proxies_hash(config)
    target_dist = FeatureDistribution.read_json(layout.require(layout.ela(h_ela), "ela"))
    X = layout.load_design(h_ela)
    params = config.gp.to_params()

    result = evolve(
        target_dist, X, params, gp_stream(config), config.ela.rate_ela, config.ela.n_ela, config.ela.feature_sets
    )
    best = top_k(result.archive, params.k)
    if not best:
        raise NoValidCandidate("No valid proxy to extract")
    ledger = BudgetLedger()
    ledger.charge(Phase.GENERATION, EvalKind.PROXY, len(result.archive) * len(X))

    manifest_path = write_json(
        layout.proxies(h),
        {
            "problem": config.problem,
            "ela_hash": h_ela,
            "proxies": [{"rank": i + 1, "tree": c.key, "fitness": c.fitness} for i, c in enumerate(best)],
            "history": result.history,
            "ledger": ledger.to_dict(),
        },
    )
    curve_path = layout.gp_curve(h)
    with open(curve_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["generation", "best_fitness"])
        for generation, value in enumerate(result.history):
            writer.writerow([generation, repr(float(value))])
    layout.record([manifest_path, curve_path], "gen-proxies", h)

    print("generation,best_fitness")
    for generation, value in enumerate(result.history):
        print(f"{generation},{value!r}")
    print(f"Generated: {manifest_path}")
    print(f"Generated: {curve_path}")
    return manifest_path


def build_proxies(config: PipelineConfig, layout: RunLayout, target: ProblemSpec) -> List[ProblemSpec]:
    """Problems the designer scores on under the configured condition

    Raises:
        ArtifactMissing: If the stage providing them has not run
    """
    condition = config.condition
    if condition is Condition.REAL_WORLD_DIRECT:
        return [target]
    h_ela = ela_hash(config)
    if condition is Condition.BENCHMARK_DRIVEN:
        pool = read_json(layout.require(layout.pool(h_ela), "ela"))
        names = [name for name, _ in pool["distances"][: config.gp.k]]
        registry = ProblemRegistry()
        return [registry.get(name, config.master_seed) for name in names]
    manifest = read_json(layout.require(layout.proxies(proxies_hash(config)), "gen-proxies"))
    X = layout.load_design(h_ela)
    proxies = [
        proxy_problem(parse_prefix(entry["tree"]), target, X, name=f"proxy-{entry['rank']}")
        for entry in manifest["proxies"]
    ]
    if not proxies:
        raise ArtifactMissing("The proxy manifest lists no proxies")
    return proxies


def cmd_discover(config: PipelineConfig) -> Path:
    """Run the discovery session(s) under the configured condition

    Raises:
        ArtifactMissing: If the proxies of the condition are unavailable
        InvalidConfig: On invalid designer settings
    """
    config.validate()
    target = load_target(config)
    layout = layout_for(config)
    condition = config.condition
    h = discovery_hash(config)
    designer = config.designer
    budget = config.budget(target.dim)
    proxies = build_proxies(config, layout, target)
    initial = de_baseline(target.dim, budget)
    seeds = RandomStream(config.master_seed).child(DISCOVERY_STREAM)

    def make_session(index: int) -> DiscoverySession:
        return DiscoverySession(
            condition=condition,
            target=target,
            proxies=proxies,
            iterations=designer.iterations,
            inner_budget=budget,
            repetitions=designer.repetitions,
            seed=seeds.child(index).draw_seed(),
            initial_config=initial,
            ledger=BudgetLedger(),
            workers=designer.workers,
        )

    proposer = make_proposer(designer.proposer, designer.llm_settings())
    results = discover_sessions(make_session, proposer, designer.sessions)
    best = results[0]
    ledger = BudgetLedger()
    for result in results:
        ledger.merge(result.session.ledger)

    champion_path = write_json(
        layout.champion(condition.value, h),
        {
            "problem": target.name,
            "condition": condition.value,
            "proxies": [p.name for p in proxies],
            "champion": best.champion.to_dict(),
            "champion_score": best.champion_score,
            "champions": [c.to_dict() for c in best.champions(config.validation.champions)],
            "session_scores": [r.champion_score for r in results],
            "direct_equivalent_evals": sum(r.session.direct_equivalent_evals for r in results),
            "ledger": ledger.to_dict(),
        },
    )
    history_path = best.session.write_history_jsonl(layout.history(condition.value, h))
    layout.record([champion_path, history_path], "discover", h)
    print(f"Generated: {champion_path}")
    print(f"Generated: {history_path}")
    print(f"Champion: {best.champion.label} (score {best.champion_score:.6f})")
    print(f"Proxy evaluations: {ledger.proxy_evals}")
    print(f"Target evaluations: {ledger.target_evals}")
    return champion_path


def _write_runs(runs: List[AlgorithmRuns], directory: Path) -> List[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for algorithm in runs:
        for index, record in enumerate(algorithm.records):
            stem = f"{_safe(algorithm.label)}-run{index:02d}"
            paths.append(record.write_json(directory / f"{stem}.json"))
            paths.append(record.write_trace_csv(directory / f"{stem}.csv"))
    return paths


def _write_spectrum(path: Path, target: ProblemSpec, x: List[float]) -> bool:
    spectrum = solution_spectrum(target, np.asarray(x, dtype=float))
    if spectrum is None:
        return False
    wavelengths, reflectance, transmittance = spectrum
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SPECTRUM_HEADER)
        for row in zip(wavelengths, reflectance, transmittance):
            writer.writerow([repr(float(v)) for v in row])
    return True


def cmd_validate(config: PipelineConfig) -> Path:
    """Validate the champions of a discovery on the real target

    Raises:
        ArtifactMissing: If `discover` has not run for this condition
    """
    config.validate()
    target = load_target(config)
    layout = layout_for(config)
    condition = config.condition.value
    h = validation_hash(config)
    payload = read_json(layout.require(layout.champion(condition, discovery_hash(config)), "discover"))
    champions = [AlgorithmConfig.from_dict(c) for c in payload["champions"]]

    ledger = BudgetLedger.from_dict(payload["ledger"])
    pool_path = layout.pool(ela_hash(config))
    if pool_path.exists():
        ledger.merge(BudgetLedger.from_dict(read_json(pool_path)["ledger"]))

    budget = config.budget(target.dim)
    runs = config.validation.runs
    seed = RandomStream(config.master_seed).child(VALIDATION_STREAM).draw_seed()
    report = validate(
        champions, target, budget, runs, seed, ledger, payload["direct_equivalent_evals"], label_prefix=f"{condition}:"
    )
    if config.validation.with_baselines:
        baseline_seed = RandomStream(config.master_seed).child(BASELINE_STREAM).draw_seed()
        report.baselines = run_baselines(target, budget, runs, baseline_seed, ledger)

    paths = _write_runs(report.champions + report.baselines, layout.validation_runs(condition, h))
    report_path = report.write_json(layout.report(condition, h))
    paths.append(report_path)
    spectrum_path = layout.spectrum(condition, h)
    if _write_spectrum(spectrum_path, target, report.best.best_record.best_x):
        paths.append(spectrum_path)
    layout.record(paths, "validate", h)

    print(f"Generated: {report_path}")
    print(f"Run records: {len(report.champions) * runs + len(report.baselines) * runs}")
    print(f"Target evaluations: {report.ledger.target_evals}")
    if report.h2_ratio is not None:
        print(f"H2 ratio: {report.h2_ratio:.2f}")
    return report_path


def cmd_baseline(config: PipelineConfig) -> Path:
    """RS, DE and LSHADE on the target, `runs` times each"""
    config.validate()
    target = load_target(config)
    layout = layout_for(config)
    h = baseline_hash(config)
    budget = config.budget(target.dim)
    runs = config.validation.runs
    ledger = BudgetLedger()
    seed = RandomStream(config.master_seed).child(BASELINE_STREAM).draw_seed()
    baselines = run_baselines(target, budget, runs, seed, ledger)

    paths = _write_runs(baselines, layout.baseline_runs(h))
    summary_path = write_json(
        layout.baseline_summary(h),
        {
            "problem": target.name,
            "budget": budget,
            "runs": runs,
            "baselines": [b.summary() for b in baselines],
            "ledger": ledger.to_dict(),
        },
    )
    paths.append(summary_path)
    layout.record(paths, "baseline", h)
    print(f"Generated: {summary_path}")
    for b in baselines:
        print(f"{b.label}: median AOCC {b.summary()['aocc_median']:.4f}")
    return summary_path
