"""Experiment driver: single enhancement runs and seeded multi-run comparisons.

A comparison executes ``runs_per_algorithm`` seeded optimizer runs per
image and algorithm (seed = base_seed + run index), writes one convergence
CSV per run plus the best run's enhanced image, and aggregates everything
into a JSON report with pairwise Kruskal-Wallis p-values between the
evolutionary algorithms' fitness samples.

All numeric outputs are bit-reproducible for a fixed config and base seed;
only the wall-clock fields vary between repetitions.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .histeq import equalize
from .image import GrayImage, StatMaps, load_image, local_stats, save_image
from .metrics import DvBv, FitnessBreakdown, dv_bv, fitness
from .optimizers import (
    DeConfig,
    GaConfig,
    Objective,
    RunResult,
    SomaConfig,
    de_run,
    ga_run,
    soma_run,
)
from .stats import kruskal_wallis
from .transform import EnhanceParams, ParamBounds, apply_transform, default_bounds

__all__ = [
    "ALGORITHMS",
    "ExperimentError",
    "ExperimentConfig",
    "EnhanceOutcome",
    "AlgorithmCell",
    "ImageReport",
    "ComparisonReport",
    "make_objective",
    "enhance_once",
    "write_trace_csv",
    "read_trace_csv",
    "run_experiment",
]

ALGORITHMS = ("he", "ga", "de", "soma")

_RUNNERS = {"ga": ga_run, "de": de_run, "soma": soma_run}
_EA_CONFIG_TYPES = {"ga": GaConfig, "de": DeConfig, "soma": SomaConfig}


class ExperimentError(RuntimeError):
    """A comparison could not start or finish (bad config, unreadable image)."""


@dataclass
class ExperimentConfig:
    images: list[str]
    algorithms: list[str]
    runs_per_algorithm: int = 35
    base_seed: int = 0
    output_dir: str = "enhance_results"
    window: int = 3
    workers: int = 0
    ga: GaConfig = field(default_factory=GaConfig)
    de: DeConfig = field(default_factory=DeConfig)
    soma: SomaConfig = field(default_factory=SomaConfig)

    def __post_init__(self) -> None:
        if not self.images:
            raise ValueError("need at least one input image")
        if not self.algorithms:
            raise ValueError("need at least one algorithm")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; choose from {list(ALGORITHMS)}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("duplicate algorithm names")
        if self.runs_per_algorithm < 1:
            raise ValueError("runs_per_algorithm must be at least 1")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        data = dict(raw)
        kwargs = {}
        for name, cfg_type in _EA_CONFIG_TYPES.items():
            if name in data:
                sub = data.pop(name)
                try:
                    kwargs[name] = cfg_type(**sub)
                except TypeError as exc:
                    raise ValueError(f"bad {name} config: {exc}") from exc
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data, **kwargs)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def config_for(self, algorithm: str):
        return {"ga": self.ga, "de": self.de, "soma": self.soma}[algorithm]


def make_objective(img: GrayImage, stats: StatMaps) -> Objective:
    """The scalar objective the optimizers maximize for this image.

    The statistics maps are computed once per input image and shared by
    every candidate evaluation.
    """

    def objective(vec: np.ndarray) -> float:
        return fitness(apply_transform(img, EnhanceParams.from_array(vec), stats)).fitness

    return objective


def _metrics_dict(breakdown: FitnessBreakdown, dvbv: DvBv) -> dict:
    out = dataclasses.asdict(breakdown)
    out.update(dataclasses.asdict(dvbv))
    return out


@dataclass
class EnhanceOutcome:
    """One enhancement of one image, with metrics for both sides.

    ``run`` is None when the algorithm was histogram equalization.
    """

    algorithm: str
    seed: int
    input_path: str
    output_path: str
    run: RunResult | None
    params: EnhanceParams | None
    original_fitness: FitnessBreakdown
    original_dvbv: DvBv
    enhanced_fitness: FitnessBreakdown
    enhanced_dvbv: DvBv

    def report_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "input": self.input_path,
            "output": self.output_path,
            "params": None if self.params is None else dataclasses.asdict(self.params),
            "best_fitness": None if self.run is None else self.run.best_fitness,
            "evaluations": None if self.run is None else self.run.evaluations,
            "original": _metrics_dict(self.original_fitness, self.original_dvbv),
            "enhanced": _metrics_dict(self.enhanced_fitness, self.enhanced_dvbv),
        }


def write_trace_csv(path: str | Path, run: RunResult | None) -> None:
    """Convergence trace as ``iteration,best_fitness`` rows; floats keep full precision."""
    lines = ["iteration,best_fitness"]
    if run is not None:
        lines.extend(f"{i},{f!r}" for i, f in run.trace)
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace_csv(path: str | Path) -> list[tuple[int, float]]:
    rows = Path(path).read_text().strip().splitlines()[1:]
    return [(int(r.split(",")[0]), float(r.split(",")[1])) for r in rows]


def enhance_once(
    image_path: str | Path,
    algorithm: str,
    seed: int,
    out_path: str | Path,
    *,
    algo_config=None,
    window: int = 3,
    workers: int = 0,
    bounds: ParamBounds | None = None,
    trace_path: str | Path | None = None,
) -> EnhanceOutcome:
    """Enhance one image end to end and write the result as PGM.

    For the evolutionary algorithms the objective is the fitness of the
    transformed image; for ``he`` the image is equalized directly.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {list(ALGORITHMS)}")
    img = load_image(image_path)
    original_fitness = fitness(img)
    original_dvbv = dv_bv(img)

    run: RunResult | None = None
    params: EnhanceParams | None = None
    if algorithm == "he":
        enhanced = equalize(img)
    else:
        stats = local_stats(img, window)
        objective = make_objective(img, stats)
        cfg = algo_config if algo_config is not None else _EA_CONFIG_TYPES[algorithm]()
        runner = _RUNNERS[algorithm]
        run = runner(objective, bounds or default_bounds(), cfg, seed, workers=workers)
        params = run.best_params
        enhanced = apply_transform(img, params, stats)

    save_image(enhanced, out_path)
    if trace_path is not None:
        write_trace_csv(trace_path, run)
    return EnhanceOutcome(
        algorithm=algorithm,
        seed=seed,
        input_path=str(image_path),
        output_path=str(out_path),
        run=run,
        params=params,
        original_fitness=original_fitness,
        original_dvbv=original_dvbv,
        enhanced_fitness=fitness(enhanced),
        enhanced_dvbv=dv_bv(enhanced),
    )


@dataclass
class AlgorithmCell:
    """Aggregated statistics for one image x algorithm pair."""

    algorithm: str
    fitness_samples: list[float]
    mean_fitness: float
    std_fitness: float
    best_fitness: float
    best_seed: int
    best_params: dict | None
    dv: float
    bv: float
    edge_count: int
    mean_seconds: float
    std_seconds: float
    enhanced_image: str
    trace_csvs: list[str]


@dataclass
class ImageReport:
    path: str
    original: dict
    algorithms: dict[str, AlgorithmCell]
    p_values: dict[str, float]


@dataclass
class ComparisonReport:
    base_seed: int
    runs_per_algorithm: int
    window: int
    images: dict[str, ImageReport]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def _image_key(path: str, taken: set[str]) -> str:
    base = Path(path).stem or "image"
    key = base
    suffix = 1
    while key in taken:
        suffix += 1
        key = f"{base}_{suffix}"
    taken.add(key)
    return key


def run_experiment(cfg: ExperimentConfig) -> ComparisonReport:
    """Run the full comparison described by ``cfg`` and write all artifacts.

    Every image is loaded up front so a bad path aborts before any
    optimization starts. Histogram equalization is deterministic and runs
    once per image; rank tests are computed for algorithm pairs where both
    sides have at least two fitness samples.
    """
    loaded: list[tuple[str, str, GrayImage]] = []
    taken: set[str] = set()
    for path in cfg.images:
        try:
            img = load_image(path)
        except Exception as exc:
            raise ExperimentError(f"failed to load {path}: {exc}") from exc
        loaded.append((_image_key(path, taken), str(path), img))

    outdir = Path(cfg.output_dir)
    traces_dir = outdir / "traces"
    traces_dir.mkdir(parents=True, exist_ok=True)

    bounds = default_bounds()
    images: dict[str, ImageReport] = {}
    for key, path, img in loaded:
        stats = local_stats(img, cfg.window)
        objective = make_objective(img, stats)
        original = _metrics_dict(fitness(img), dv_bv(img))

        cells: dict[str, AlgorithmCell] = {}
        for algo in cfg.algorithms:
            if algo == "he":
                t0 = time.perf_counter()
                enhanced = equalize(img)
                seconds = [time.perf_counter() - t0]
                samples = [fitness(enhanced).fitness]
                best_seed = cfg.base_seed
                best_params = None
                trace_csvs: list[str] = []
            else:
                runner = _RUNNERS[algo]
                algo_cfg = cfg.config_for(algo)
                samples, seconds, results, trace_csvs = [], [], [], []
                for run_idx in range(cfg.runs_per_algorithm):
                    seed = cfg.base_seed + run_idx
                    t0 = time.perf_counter()
                    result = runner(objective, bounds, algo_cfg, seed, workers=cfg.workers)
                    seconds.append(time.perf_counter() - t0)
                    samples.append(result.best_fitness)
                    results.append(result)
                    trace_path = traces_dir / f"{key}_{algo}_run{run_idx:03d}.csv"
                    write_trace_csv(trace_path, result)
                    trace_csvs.append(str(trace_path))
                best_run = results[int(np.argmax(samples))]
                best_seed = best_run.seed
                best_params = dataclasses.asdict(best_run.best_params)
                enhanced = apply_transform(img, best_run.best_params, stats)

            image_path = outdir / f"{key}_{algo}_best.pgm"
            save_image(enhanced, image_path)
            enhanced_fit = fitness(enhanced)
            enhanced_dvbv = dv_bv(enhanced)
            cells[algo] = AlgorithmCell(
                algorithm=algo,
                fitness_samples=samples,
                mean_fitness=float(np.mean(samples)),
                std_fitness=float(np.std(samples)),
                best_fitness=float(np.max(samples)),
                best_seed=best_seed,
                best_params=best_params,
                dv=enhanced_dvbv.dv,
                bv=enhanced_dvbv.bv,
                edge_count=enhanced_fit.edge_count,
                mean_seconds=float(np.mean(seconds)),
                std_seconds=float(np.std(seconds)),
                enhanced_image=str(image_path),
                trace_csvs=trace_csvs,
            )

        p_values: dict[str, float] = {}
        testable = [a for a in cfg.algorithms if len(cells[a].fitness_samples) >= 2]
        for i, a in enumerate(testable):
            for b in testable[i + 1 :]:
                _, p = kruskal_wallis(cells[a].fitness_samples, cells[b].fitness_samples)
                p_values[f"{a}_vs_{b}"] = p

        images[key] = ImageReport(
            path=path, original=original, algorithms=cells, p_values=p_values
        )

    report = ComparisonReport(
        base_seed=cfg.base_seed,
        runs_per_algorithm=cfg.runs_per_algorithm,
        window=cfg.window,
        images=images,
    )
    report.save(outdir / "report.json")
    return report
