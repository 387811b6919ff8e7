"""Command-line interface: enhance, compare and metrics subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    enhance_once,
    run_experiment,
)
from .image import load_image
from .metrics import dv_bv, fitness
from .optimizers import DeConfig, GaConfig, SomaConfig

_EA_CONFIG_TYPES = {"ga": GaConfig, "de": DeConfig, "soma": SomaConfig}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evoenhance",
        description="Automatic gray-scale image enhancement with GA, DE and SOMA",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enh = sub.add_parser("enhance", help="enhance a single image")
    enh.add_argument("--input", required=True, help="input PGM (P5) or 8-bit grayscale PNG")
    enh.add_argument("--algo", required=True, choices=ALGORITHMS)
    enh.add_argument("--seed", required=True, type=int, help="run seed (ignored for he)")
    enh.add_argument("--config", help="JSON file with algorithm settings")
    enh.add_argument("--out", required=True, help="output PGM path")
    enh.add_argument("--trace", help="write the convergence trace CSV here")
    enh.add_argument("--report", help="write a metrics report JSON here")
    enh.set_defaults(func=cmd_enhance)

    cmp_ = sub.add_parser("compare", help="run a multi-run algorithm comparison")
    cmp_.add_argument("--config", required=True, help="experiment config JSON")
    cmp_.set_defaults(func=cmd_compare)

    met = sub.add_parser("metrics", help="print quality metrics of an image as JSON")
    met.add_argument("--input", required=True)
    met.set_defaults(func=cmd_metrics)

    return parser


def _load_enhance_config(path: str | None, algorithm: str) -> tuple[object | None, int, int]:
    """Split an enhance config JSON into (algorithm config, window, workers)."""
    if path is None:
        return None, 3, 0
    raw = json.loads(Path(path).read_text())
    window = raw.pop("window", 3)
    workers = raw.pop("workers", 0)
    if algorithm == "he":
        if raw:
            raise ValueError(f"unused config keys for he: {sorted(raw)}")
        return None, window, workers
    try:
        return _EA_CONFIG_TYPES[algorithm](**raw), window, workers
    except TypeError as exc:
        raise ValueError(f"bad {algorithm} config: {exc}") from exc


def cmd_enhance(args: argparse.Namespace) -> int:
    algo_config, window, workers = _load_enhance_config(args.config, args.algo)
    outcome = enhance_once(
        args.input,
        args.algo,
        args.seed,
        args.out,
        algo_config=algo_config,
        window=window,
        workers=workers,
        trace_path=args.trace,
    )
    if args.report:
        Path(args.report).write_text(json.dumps(outcome.report_dict(), indent=2) + "\n")
    print(
        f"{args.algo}: fitness {outcome.original_fitness.fitness:.4f} -> "
        f"{outcome.enhanced_fitness.fitness:.4f}, wrote {args.out}"
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    report = run_experiment(cfg)
    print(f"wrote {Path(cfg.output_dir) / 'report.json'} ({len(report.images)} image(s))")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    img = load_image(args.input)
    merged = dataclasses.asdict(fitness(img))
    merged.update(dataclasses.asdict(dv_bv(img)))
    print(json.dumps(merged, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
