"""Execution of AlgorithmConfigs against a BudgetedEvaluator

Random search samples the box uniformly. Every other family runs through
ModularDE, a generational differential evolution whose operators are
picked by the config: rand/1, best/1 or current-to-pbest/1 mutation,
binomial or exponential crossover, fixed or success-history adapted F/CR,
an optional external archive, linear population size reduction and
restarts on stagnation.
"""

import logging
from typing import List, Optional

import numpy as np

from ..core.budget import BudgetedEvaluator, BudgetLedger
from ..core.errors import BudgetExhausted
from ..core.records import RunRecord
from ..core.rng import RandomStream
from .config import AlgorithmConfig, BoundHandling, Crossover, Family, Mutation, Restart

logger = logging.getLogger(__name__)

FINAL_POPULATION = 4
MEMORY_INIT = 0.5
PARAMETER_SCALE = 0.1
RESTART_WINDOW_FACTOR = 10


def repair(x: np.ndarray, lb: np.ndarray, ub: np.ndarray, method: BoundHandling) -> np.ndarray:
    """Bring a trial vector back into the box"""
    if method is BoundHandling.REFLECT:
        x = np.where(x < lb, 2.0 * lb - x, x)
        x = np.where(x > ub, 2.0 * ub - x, x)
    return np.clip(x, lb, ub)


class RandomSearch:
    """Uniform sampling of the box until the budget is spent"""

    def __init__(self, config: AlgorithmConfig, evaluator: BudgetedEvaluator, rng: RandomStream) -> None:
        self.config = config
        self.evaluator = evaluator
        self.rng = rng

    def run(self) -> None:
        lb, ub = self.evaluator.bounds.lb, self.evaluator.bounds.ub
        while not self.evaluator.exhausted:
            self.evaluator(self.rng.draw_uniform(lb, ub))


class ModularDE:
    """Generational DE assembled from the modules a config selects

    Attributes:
        population_sizes: Population size at the start of each generation
        best_history: Best population fitness after each generation
        restarts: Number of restarts performed
    """

    def __init__(self, config: AlgorithmConfig, evaluator: BudgetedEvaluator, rng: RandomStream) -> None:
        self.config = config
        self.evaluator = evaluator
        self.rng = rng
        self.gen = rng.generator
        self.dim = evaluator.dim
        self.lb = np.asarray(evaluator.bounds.lb, dtype=float)
        self.ub = np.asarray(evaluator.bounds.ub, dtype=float)
        self.n_init = min(config.resolve_population(self.dim), evaluator.remaining)
        self.population = np.empty((0, self.dim))
        self.fitness = np.empty(0)
        self.archive: List[np.ndarray] = []
        self.memory_f = np.full(config.memory_size, MEMORY_INIT)
        self.memory_cr = np.full(config.memory_size, MEMORY_INIT)
        self.memory_index = 0
        self.population_sizes: List[int] = []
        self.best_history: List[float] = []
        self.restarts = 0
        self._stagnation_start = 0
        self._stagnation_best = float("inf")

    # parameters

    def _sample_f(self) -> np.ndarray:
        n = len(self.population)
        if not self.config.adaptive_f:
            return np.full(n, float(self.config.F))
        slots = self.gen.integers(0, self.config.memory_size, size=n)
        values = np.empty(n)
        for i, slot in enumerate(slots):
            value = 0.0
            while value <= 0.0:
                value = self.memory_f[slot] + PARAMETER_SCALE * self.gen.standard_cauchy()
            values[i] = min(value, 1.0)
        return values

    def _sample_cr(self) -> np.ndarray:
        n = len(self.population)
        if not self.config.adaptive_cr:
            return np.full(n, float(self.config.CR))
        slots = self.gen.integers(0, self.config.memory_size, size=n)
        return np.clip(self.memory_cr[slots] + PARAMETER_SCALE * self.gen.standard_normal(n), 0.0, 1.0)

    def _update_memory(self, f_success: List[float], cr_success: List[float], gains: List[float]) -> None:
        if not gains or not (self.config.adaptive_f or self.config.adaptive_cr):
            return
        weights = np.asarray(gains) / np.sum(gains)
        f = np.asarray(f_success)
        cr = np.asarray(cr_success)
        if self.config.adaptive_f:
            self.memory_f[self.memory_index] = float(np.sum(weights * f**2) / np.sum(weights * f))
        if self.config.adaptive_cr:
            self.memory_cr[self.memory_index] = float(np.sum(weights * cr))
        self.memory_index = (self.memory_index + 1) % self.config.memory_size

    # operators

    def _distinct(self, n: int, exclude: List[int], count: int) -> List[int]:
        picks: List[int] = []
        while len(picks) < count:
            candidate = int(self.gen.integers(0, n))
            if candidate not in exclude and candidate not in picks:
                picks.append(candidate)
        return picks

    def _donor(self, exclude: List[int]) -> np.ndarray:
        """Last difference vector member, drawn from population and archive"""
        n = len(self.population)
        pool = n + (len(self.archive) if self.config.archive else 0)
        index = self._distinct(pool, exclude, 1)[0]
        return self.population[index] if index < n else self.archive[index - n]

    def _mutant(self, i: int, f: float, best: int, pbest_ids: np.ndarray) -> np.ndarray:
        pop = self.population
        mutation = self.config.mutation
        if mutation is Mutation.RAND1:
            r1, r2 = self._distinct(len(pop), [i], 2)
            return pop[r1] + f * (pop[r2] - self._donor([i, r1, r2]))
        if mutation is Mutation.BEST1:
            (r1,) = self._distinct(len(pop), [i, best], 1)
            return pop[best] + f * (pop[r1] - self._donor([i, best, r1]))
        pbest = int(pbest_ids[self.gen.integers(0, len(pbest_ids))])
        (r1,) = self._distinct(len(pop), [i], 1)
        return pop[i] + f * (pop[pbest] - pop[i]) + f * (pop[r1] - self._donor([i, r1]))

    def _crossover(self, target: np.ndarray, mutant: np.ndarray, cr: float) -> np.ndarray:
        d = self.dim
        start = int(self.gen.integers(0, d))
        mask = np.zeros(d, dtype=bool)
        if self.config.crossover is Crossover.BINOMIAL:
            mask = self.gen.random(d) < cr
            mask[start] = True
        else:
            length = 1
            while length < d and self.gen.random() < cr:
                length += 1
            mask[(start + np.arange(length)) % d] = True
        return np.where(mask, mutant, target)

    # population management

    def _initialize(self, size: int, keep: Optional[int] = None) -> None:
        kept_x = [] if keep is None else [self.population[keep].copy()]
        kept_f = [] if keep is None else [self.fitness[keep]]
        size = min(size - len(kept_x), self.evaluator.remaining)
        points = self.gen.uniform(self.lb, self.ub, size=(size, self.dim))
        values = [self.evaluator(x) for x in points]
        self.population = np.vstack([np.asarray(kept_x).reshape(-1, self.dim), points])
        self.fitness = np.asarray(kept_f + values, dtype=float)
        self.archive = []

    def _reduce_population(self) -> None:
        budget = self.evaluator.budget
        used = self.evaluator.used
        target = int(round((FINAL_POPULATION - self.n_init) / budget * used + self.n_init))
        target = max(FINAL_POPULATION, target)
        if target >= len(self.population):
            return
        keep = np.argsort(self.fitness, kind="stable")[:target]
        self.population = self.population[keep]
        self.fitness = self.fitness[keep]
        while len(self.archive) > target:
            self.archive.pop(int(self.gen.integers(0, len(self.archive))))

    def _stagnated(self) -> bool:
        best = float(self.fitness.min())
        old = self._stagnation_best
        if not np.isfinite(old) or old - best > self.config.restart_tol * max(abs(old), np.finfo(float).tiny):
            self._stagnation_best = best
            self._stagnation_start = self.evaluator.used
            return False
        window = self.config.restart_window or RESTART_WINDOW_FACTOR * len(self.population)
        return self.evaluator.used - self._stagnation_start >= window

    def _restart(self) -> None:
        self.restarts += 1
        logger.debug("Restart %d after %d evaluations", self.restarts, self.evaluator.used)
        self._initialize(len(self.population), keep=int(np.argmin(self.fitness)))
        self.memory_f[:] = MEMORY_INIT
        self.memory_cr[:] = MEMORY_INIT
        self._stagnation_start = self.evaluator.used

    # main loop

    def generation(self) -> None:
        """One generation; the last one may be partial"""
        n = len(self.population)
        f_values = self._sample_f()
        cr_values = self._sample_cr()
        best = int(np.argmin(self.fitness))
        p_size = max(2, int(round(self.config.p_best * n)))
        pbest_ids = np.argsort(self.fitness, kind="stable")[:p_size]

        n_trials = min(n, self.evaluator.remaining)
        trials = []
        for i in range(n_trials):
            mutant = self._mutant(i, f_values[i], best, pbest_ids)
            trial = self._crossover(self.population[i], mutant, cr_values[i])
            trials.append(repair(trial, self.lb, self.ub, self.config.bound_handling))
        values = [self.evaluator(trial) for trial in trials]

        f_success: List[float] = []
        cr_success: List[float] = []
        gains: List[float] = []
        for i, (trial, value) in enumerate(zip(trials, values)):
            if value > self.fitness[i]:
                continue
            if value < self.fitness[i]:
                f_success.append(f_values[i])
                cr_success.append(cr_values[i])
                gains.append(self.fitness[i] - value)
                if self.config.archive:
                    self.archive.append(self.population[i].copy())
            self.population[i] = trial
            self.fitness[i] = value
        while len(self.archive) > n:
            self.archive.pop(int(self.gen.integers(0, len(self.archive))))
        self._update_memory(f_success, cr_success, gains)

    def run(self) -> None:
        self._initialize(self.n_init)
        while not self.evaluator.exhausted and len(self.population) >= FINAL_POPULATION:
            self.population_sizes.append(len(self.population))
            self.generation()
            self.best_history.append(float(self.fitness.min()))
            if self.config.lpsr:
                self._reduce_population()
            if self.config.restart is Restart.ON_STAGNATION and not self.evaluator.exhausted and self._stagnated():
                self._restart()
        # a truncated population too small for mutation spends what is left on random points
        while not self.evaluator.exhausted:
            self.evaluator(self.gen.uniform(self.lb, self.ub))


def run(config: AlgorithmConfig, evaluator: BudgetedEvaluator, seed: int) -> RunRecord:
    """Run a configured algorithm until the evaluator's budget is spent

    Args:
        config: Algorithm configuration, validated here
        evaluator: Fresh evaluator owned by this run
        seed: Run seed

    Returns:
        RunRecord with trace and AOCC

    Raises:
        InvalidConfig: If config violates the space's invariants
        ValueError: If the evaluator was already used
    """
    config = config.validate()
    if evaluator.used != 0:
        raise ValueError("run() needs a fresh evaluator")
    rng = RandomStream(seed)
    optimizer = RandomSearch(config, evaluator, rng) if config.family is Family.RS else ModularDE(config, evaluator, rng)
    try:
        optimizer.run()
    except BudgetExhausted:
        pass
    ledger = BudgetLedger()
    ledger.charge(evaluator.phase, evaluator.kind, evaluator.used)
    return RunRecord.from_evaluator(evaluator, config.label, config.to_dict(), seed, ledger)
