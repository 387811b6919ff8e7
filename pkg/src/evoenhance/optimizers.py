"""Three population-based maximizers over a box-bounded 4-vector.

GA (binary tournament + elitism + arithmetic crossover + uniform-reset
mutation), DE (binomial crossover with a linearly decaying differential
weight, greedy replacement) and SOMA (all-to-one migration with a PRT mask
and an optional Gaussian step scale) share one objective contract: a pure
function mapping a parameter vector to the fitness to maximize.

Runs are fully seeded. All randomness is drawn by the single-threaded
driver before candidates are evaluated, and batch results are gathered in
index order, so a run is bit-reproducible whether candidate evaluation is
sequential or spread over worker threads.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .transform import EnhanceParams, ParamBounds

__all__ = [
    "Objective",
    "Algorithm",
    "RunResult",
    "GaConfig",
    "DeConfig",
    "SomaConfig",
    "random_population",
    "arithmetic_crossover",
    "tournament_select",
    "ga_run",
    "de_scale_factor",
    "de_scale_factor_to_zero",
    "de_recombine",
    "de_run",
    "prt_vector",
    "migration_candidate",
    "migration_steps",
    "soma_migrate",
    "soma_run",
]

# Pure, deterministic, thread-safe: same vector -> same fitness, always.
Objective = Callable[[np.ndarray], float]


class Algorithm(str, enum.Enum):
    GA = "ga"
    DE = "de"
    SOMA = "soma"


@dataclass(frozen=True)
class RunResult:
    """Outcome of one seeded optimizer run.

    ``trace`` holds (iteration, best-so-far fitness) pairs, one per
    iteration plus the initial population, and is monotone non-decreasing.
    """

    algorithm: Algorithm
    seed: int
    best_params: EnhanceParams
    best_fitness: float
    trace: list[tuple[int, float]]
    evaluations: int


@dataclass
class GaConfig:
    pop_size: int = 60
    iterations: int = 50
    mutation_rate: float = 0.03
    crossover_prob: float = 1.0
    elite_count: int = 6

    def __post_init__(self) -> None:
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if not 0 <= self.elite_count < self.pop_size:
            raise ValueError("elite_count must lie in [0, pop_size)")
        if not 0.0 <= self.mutation_rate <= 1.0 or not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("rates must lie in [0, 1]")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")


@dataclass
class DeConfig:
    pop_size: int = 60
    iterations: int = 50
    cr: float = 0.2
    f_min: float = 0.4
    f_max: float = 1.0
    # Alternative schedule that decays the differential weight to zero
    # instead of bottoming out at f_min; off by default.
    scale_to_zero: bool = False

    def __post_init__(self) -> None:
        if self.pop_size < 4:
            raise ValueError("pop_size must be at least 4 (target plus three distinct parents)")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must lie in [0, 1]")
        if not 0.0 < self.f_min <= self.f_max:
            raise ValueError("need 0 < f_min <= f_max")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")


@dataclass
class SomaConfig:
    pop_size: int = 25
    migration_loops: int = 50
    prt: float = 0.1
    path_length: float = 2.0
    step: float = 0.21

    def __post_init__(self) -> None:
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if not 0.0 < self.prt <= 1.0:
            raise ValueError("prt must lie in (0, 1]")
        if self.path_length <= 0.0 or not 0.0 < self.step <= self.path_length:
            raise ValueError("need path_length > 0 and 0 < step <= path_length")
        if self.migration_loops < 0:
            raise ValueError("migration_loops must be non-negative")


@contextmanager
def _batch_evaluator(obj: Objective, workers: int):
    """Yield eval_many(candidates) -> fitness array, optionally thread-backed.

    Results are gathered in candidate order either way, so the two modes are
    bit-identical.
    """
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield lambda cands: np.fromiter(
                pool.map(obj, cands), dtype=np.float64, count=len(cands)
            )
    else:
        yield lambda cands: np.fromiter(
            (obj(c) for c in cands), dtype=np.float64, count=len(cands)
        )


def random_population(bounds: ParamBounds, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform initial population, shape (size, ndim), every row in bounds."""
    if size < 2:
        raise ValueError("population size must be at least 2")
    return bounds.sample(rng, size)


def arithmetic_crossover(
    p1: np.ndarray, p2: np.ndarray, r: float
) -> tuple[np.ndarray, np.ndarray]:
    """Complementary convex blends of the parents; stays in bounds by convexity."""
    return r * p1 + (1.0 - r) * p2, r * p2 + (1.0 - r) * p1


def tournament_select(
    pop: np.ndarray, fitnesses: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Binary tournament: sample two individuals with replacement, keep the fitter."""
    i, j = rng.integers(0, len(pop), size=2)
    return pop[i] if fitnesses[i] >= fitnesses[j] else pop[j]


def _mutate_uniform(
    vec: np.ndarray, bounds: ParamBounds, rate: float, rng: np.random.Generator
) -> np.ndarray:
    """Per-gene reset mutation: with probability ``rate`` redraw a gene in its bounds."""
    out = vec.copy()
    mask = rng.random(vec.size) < rate
    for d in np.nonzero(mask)[0]:
        out[d] = rng.uniform(bounds.lo[d], bounds.hi[d])
    return out


def ga_run(
    obj: Objective,
    bounds: ParamBounds,
    cfg: GaConfig,
    seed: int,
    *,
    workers: int = 0,
) -> RunResult:
    """Generational GA with k-elitism.

    Each generation copies the ``elite_count`` fittest individuals verbatim
    and fills the remainder with mutated crossover offspring of
    tournament-selected parents.
    """
    rng = np.random.default_rng(seed)
    n_children = cfg.pop_size - cfg.elite_count
    with _batch_evaluator(obj, workers) as eval_many:
        pop = random_population(bounds, cfg.pop_size, rng)
        fit = eval_many(list(pop))
        evaluations = cfg.pop_size
        best_idx = int(np.argmax(fit))
        best_x, best_f = pop[best_idx].copy(), float(fit[best_idx])
        trace = [(0, best_f)]
        for it in range(1, cfg.iterations + 1):
            elite_idx = np.argsort(-fit, kind="stable")[: cfg.elite_count]
            elites = pop[elite_idx].copy()
            elite_fit = fit[elite_idx].copy()
            children: list[np.ndarray] = []
            while len(children) < n_children:
                p1 = tournament_select(pop, fit, rng)
                p2 = tournament_select(pop, fit, rng)
                if rng.random() < cfg.crossover_prob:
                    c1, c2 = arithmetic_crossover(p1, p2, rng.random())
                else:
                    c1, c2 = p1.copy(), p2.copy()
                children.append(_mutate_uniform(c1, bounds, cfg.mutation_rate, rng))
                children.append(_mutate_uniform(c2, bounds, cfg.mutation_rate, rng))
            children = children[:n_children]
            child_fit = eval_many(children)
            evaluations += len(children)
            pop = np.vstack([elites, np.array(children)])
            fit = np.concatenate([elite_fit, child_fit])
            gen_best = int(np.argmax(fit))
            if fit[gen_best] > best_f:
                best_x, best_f = pop[gen_best].copy(), float(fit[gen_best])
            trace.append((it, best_f))
    return RunResult(
        algorithm=Algorithm.GA,
        seed=seed,
        best_params=EnhanceParams.from_array(best_x),
        best_fitness=best_f,
        trace=trace,
        evaluations=evaluations,
    )


def de_scale_factor(i: int, max_iter: int, f_min: float = 0.4, f_max: float = 1.0) -> float:
    """Differential weight ramping linearly from f_max at i=0 down to f_min at i=max_iter."""
    return f_min + (f_max - f_min) * (max_iter - i) / max_iter


def de_scale_factor_to_zero(
    i: int, max_iter: int, f_min: float = 0.4, f_max: float = 1.0
) -> float:
    """Alternative ramp from (f_max - f_min) down to zero at i=max_iter."""
    return (f_max - f_min) * (max_iter - i) / max_iter


def de_recombine(
    target: np.ndarray,
    p1: np.ndarray,
    p2: np.ndarray,
    p3: np.ndarray,
    f: float,
    cr: float,
    bounds: ParamBounds,
    rng: np.random.Generator,
) -> np.ndarray:
    """Binomial crossover: per gene take p3 + f*(p1 - p2) with probability cr, else the target."""
    mutant = p3 + f * (p1 - p2)
    mask = rng.random(target.size) <= cr
    return bounds.clip(np.where(mask, mutant, target))


def de_run(
    obj: Objective,
    bounds: ParamBounds,
    cfg: DeConfig,
    seed: int,
    *,
    workers: int = 0,
) -> RunResult:
    """DE with greedy replacement: an individual is replaced only by a strictly fitter offspring.

    One iteration builds every offspring against a snapshot of the current
    population, evaluates the batch, then applies all replacements.
    """
    rng = np.random.default_rng(seed)
    schedule = de_scale_factor_to_zero if cfg.scale_to_zero else de_scale_factor
    with _batch_evaluator(obj, workers) as eval_many:
        pop = random_population(bounds, cfg.pop_size, rng)
        fit = eval_many(list(pop))
        evaluations = cfg.pop_size
        best_idx = int(np.argmax(fit))
        best_x, best_f = pop[best_idx].copy(), float(fit[best_idx])
        trace = [(0, best_f)]
        for it in range(cfg.iterations):
            f = schedule(it, cfg.iterations, cfg.f_min, cfg.f_max)
            offspring = []
            for i in range(cfg.pop_size):
                others = rng.choice(cfg.pop_size - 1, size=3, replace=False)
                others[others >= i] += 1
                offspring.append(
                    de_recombine(pop[i], pop[others[0]], pop[others[1]], pop[others[2]],
                                 f, cfg.cr, bounds, rng)
                )
            off_fit = eval_many(offspring)
            evaluations += cfg.pop_size
            improved = off_fit > fit
            pop[improved] = np.array(offspring)[improved]
            fit[improved] = off_fit[improved]
            gen_best = int(np.argmax(fit))
            if fit[gen_best] > best_f:
                best_x, best_f = pop[gen_best].copy(), float(fit[gen_best])
            trace.append((it + 1, best_f))
    return RunResult(
        algorithm=Algorithm.DE,
        seed=seed,
        best_params=EnhanceParams.from_array(best_x),
        best_fitness=best_f,
        trace=trace,
        evaluations=evaluations,
    )


def prt_vector(prt: float, nd: int, rng: np.random.Generator) -> np.ndarray:
    """0/1 mask choosing which dimensions move this step: 1 where rand(d) < prt."""
    if not 0.0 < prt <= 1.0:
        raise ValueError("prt must lie in (0, 1]")
    return (rng.random(nd) < prt).astype(np.float64)


def migration_candidate(
    start: np.ndarray,
    leader: np.ndarray,
    t: float,
    prt_mask: np.ndarray,
    gauss_scale: float | None = None,
) -> np.ndarray:
    """Position at path parameter t toward the leader, moving only masked dimensions.

    t=1 with a full mask lands exactly on the leader; t=2 reflects past it.
    When ``gauss_scale`` is given the whole step term is scaled by it.
    """
    scale = t if gauss_scale is None else t * gauss_scale
    return start + (leader - start) * (scale * prt_mask)


def migration_steps(path_length: float, step: float) -> list[float]:
    """The sampled path parameters 0, step, 2*step, ... up to path_length."""
    count = int((path_length + 1e-9) / step) + 1
    return [k * step for k in range(count)]


def soma_migrate(
    individual: np.ndarray,
    leader: np.ndarray,
    cfg: SomaConfig,
    obj: Objective,
    bounds: ParamBounds,
    rng: np.random.Generator,
    *,
    eval_many=None,
) -> tuple[np.ndarray, float]:
    """Walk one individual along the path toward the leader; keep the best position.

    A fresh PRT mask is drawn at every step, and with probability 0.5 the
    step term is additionally scaled by a standard normal draw. The t=0
    candidate is the starting position itself, so an individual never moves
    to a worse point.
    """
    if eval_many is None:
        eval_many = lambda cands: np.fromiter(
            (obj(c) for c in cands), dtype=np.float64, count=len(cands)
        )
    candidates = []
    for t in migration_steps(cfg.path_length, cfg.step):
        mask = prt_vector(cfg.prt, individual.size, rng)
        gauss = rng.standard_normal() if rng.random() >= 0.5 else None
        candidates.append(bounds.clip(migration_candidate(individual, leader, t, mask, gauss)))
    fits = eval_many(candidates)
    best = int(np.argmax(fits))
    return candidates[best], float(fits[best])


def soma_run(
    obj: Objective,
    bounds: ParamBounds,
    cfg: SomaConfig,
    seed: int,
    *,
    workers: int = 0,
) -> RunResult:
    """All-to-one SOMA: per migration loop every individual walks toward the fittest one.

    The leader is fixed for the whole loop and does not move, so its
    position at the end of a loop equals its position at the start.
    """
    rng = np.random.default_rng(seed)
    steps_per_path = len(migration_steps(cfg.path_length, cfg.step))
    with _batch_evaluator(obj, workers) as eval_many:
        pop = random_population(bounds, cfg.pop_size, rng)
        fit = eval_many(list(pop))
        evaluations = cfg.pop_size
        best_idx = int(np.argmax(fit))
        best_x, best_f = pop[best_idx].copy(), float(fit[best_idx])
        trace = [(0, best_f)]
        for loop in range(1, cfg.migration_loops + 1):
            leader_idx = int(np.argmax(fit))
            leader = pop[leader_idx].copy()
            for i in range(cfg.pop_size):
                if i == leader_idx:
                    continue
                new_x, new_f = soma_migrate(
                    pop[i], leader, cfg, obj, bounds, rng, eval_many=eval_many
                )
                evaluations += steps_per_path
                pop[i] = new_x
                fit[i] = new_f
            loop_best = int(np.argmax(fit))
            if fit[loop_best] > best_f:
                best_x, best_f = pop[loop_best].copy(), float(fit[loop_best])
            trace.append((loop, best_f))
    return RunResult(
        algorithm=Algorithm.SOMA,
        seed=seed,
        best_params=EnhanceParams.from_array(best_x),
        best_fitness=best_f,
        trace=trace,
        evaluations=evaluations,
    )
