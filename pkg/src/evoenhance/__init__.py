"""Automatic gray-scale image enhancement driven by evolutionary search.

Three interchangeable optimizers (GA, DE, SOMA) tune a four-parameter
local contrast transform to maximize an edge/entropy objective, with a
histogram-equalization baseline and a seeded comparison harness.
"""

from .harness import (
    ComparisonReport,
    EnhanceOutcome,
    ExperimentConfig,
    ExperimentError,
    enhance_once,
    make_objective,
    run_experiment,
)
from .histeq import equalize
from .image import (
    FormatError,
    GrayImage,
    StatMaps,
    global_mean,
    histogram,
    load_image,
    local_stats,
    save_image,
)
from .metrics import (
    DvBv,
    FitnessBreakdown,
    auto_threshold,
    dv_bv,
    edge_pixel_count,
    entropy,
    fitness,
    sobel_magnitude,
)
from .optimizers import (
    Algorithm,
    DeConfig,
    GaConfig,
    RunResult,
    SomaConfig,
    de_run,
    ga_run,
    soma_run,
)
from .stats import kruskal_wallis
from .synth import low_contrast_scene
from .transform import EnhanceParams, ParamBounds, apply_transform, default_bounds

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "ComparisonReport",
    "DeConfig",
    "DvBv",
    "EnhanceOutcome",
    "EnhanceParams",
    "ExperimentConfig",
    "ExperimentError",
    "FitnessBreakdown",
    "FormatError",
    "GaConfig",
    "GrayImage",
    "ParamBounds",
    "RunResult",
    "SomaConfig",
    "StatMaps",
    "apply_transform",
    "auto_threshold",
    "de_run",
    "default_bounds",
    "dv_bv",
    "edge_pixel_count",
    "enhance_once",
    "entropy",
    "equalize",
    "fitness",
    "ga_run",
    "global_mean",
    "histogram",
    "kruskal_wallis",
    "load_image",
    "local_stats",
    "low_contrast_scene",
    "make_objective",
    "run_experiment",
    "save_image",
    "sobel_magnitude",
    "soma_run",
]
