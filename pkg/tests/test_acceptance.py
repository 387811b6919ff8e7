"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. The desk-scale comparison (criteria 6 to 9) runs once as a shared
fixture; expect the whole module to take a few minutes.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from evoenhance.histeq import equalize
from evoenhance.image import GrayImage, load_image, local_stats, save_image
from evoenhance.metrics import auto_threshold, dv_bv, entropy, fitness, sobel_magnitude
from evoenhance.optimizers import DeConfig, GaConfig, SomaConfig, de_run, ga_run, soma_run
from evoenhance.stats import kruskal_wallis
from evoenhance.synth import low_contrast_scene
from evoenhance.transform import default_bounds

from .oracles import brute_otsu, naive_dv_bv, naive_local_stats, naive_sobel

from evoenhance.harness import ExperimentConfig, run_experiment

BOUNDS = default_bounds()
QUAD_OPT = np.array([1.05, 0.35, 0.12, 0.9])
FULL_CONFIGS = {
    "ga": (ga_run, GaConfig()),
    "de": (de_run, DeConfig()),
    "soma": (soma_run, SomaConfig()),
}
DESK_SEED = 2024
DESK_RUNS = 10


def quadratic(x):
    d = x - QUAD_OPT
    return -float(d @ d)


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"\n[acceptance] criterion {number} ({name}): FAIL")
        raise
    else:
        print(f"\n[acceptance] criterion {number} ({name}): PASS")


@pytest.fixture(scope="module")
def quad_results():
    """20 seeded runs per algorithm at the full default scale."""
    started = time.perf_counter()
    results = {
        name: [runner(quadratic, BOUNDS, cfg, seed) for seed in range(20)]
        for name, (runner, cfg) in FULL_CONFIGS.items()
    }
    return results, time.perf_counter() - started


@pytest.fixture(scope="module")
def desk_experiment(tmp_path_factory):
    """The desk-scale comparison: 128x128 scene, pop 20, 20 iterations, 10 runs."""
    outdir = tmp_path_factory.mktemp("desk")
    scene = low_contrast_scene(128)
    scene_path = outdir / "scene.pgm"
    save_image(scene, scene_path)
    cfg = ExperimentConfig(
        images=[str(scene_path)],
        algorithms=["he", "ga", "de", "soma"],
        runs_per_algorithm=DESK_RUNS,
        base_seed=DESK_SEED,
        output_dir=str(outdir / "results"),
        ga=GaConfig(pop_size=20, iterations=20),
        de=DeConfig(pop_size=20, iterations=20),
        soma=SomaConfig(pop_size=20, migration_loops=20),
    )
    started = time.perf_counter()
    report = run_experiment(cfg)
    return report, time.perf_counter() - started


def test_criterion_1_oracle_equivalence():
    with criterion(1, "oracle equivalence"):
        rng = np.random.default_rng(20240814)
        started = time.perf_counter()
        for _ in range(50):
            h, w = rng.integers(3, 17, size=2)
            arr = rng.integers(0, 256, size=(int(h), int(w)), dtype=np.int64)
            img = GrayImage(arr)

            stats = local_stats(img, 3)
            mean_ref, std_ref = naive_local_stats(arr, 3)
            assert np.allclose(stats.mean, mean_ref, atol=1e-9)
            assert np.allclose(stats.std, std_ref, atol=1e-7)

            grad = sobel_magnitude(img)
            assert np.allclose(grad, naive_sobel(arr), atol=1e-9)

            d = dv_bv(img)
            dv_ref, bv_ref, fg_ref, bg_ref = naive_dv_bv(arr)
            assert (d.foreground_count, d.background_count) == (fg_ref, bg_ref)
            assert abs(d.dv - dv_ref) <= 1e-7 and abs(d.bv - bv_ref) <= 1e-7

            assert abs(auto_threshold(grad) - brute_otsu(grad)) <= 1e-9
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0, f"oracle sweep took {elapsed:.1f}s"


def test_criterion_2_analytic_cases():
    with criterion(2, "analytic cases"):
        uniform = GrayImage(np.arange(256, dtype=np.uint8).reshape(16, 16))
        assert entropy(uniform) == pytest.approx(math.log(256.0), abs=1e-9)

        constant = GrayImage(np.full((8, 8), 91, dtype=np.uint8))
        assert entropy(constant) == 0.0
        assert np.all(sobel_magnitude(constant) == 0.0)
        fb = fitness(constant)
        assert fb.fitness == 0.0 and fb.guarded
        assert np.all(equalize(constant).pixels == 255)


def test_criterion_3_optimizer_sanity(quad_results):
    with criterion(3, "optimizer sanity on the concave quadratic"):
        results, elapsed = quad_results
        for name, runs in results.items():
            hits = sum(
                np.all(np.abs(r.best_params.as_array() - QUAD_OPT) <= 0.05) for r in runs
            )
            assert hits >= 19, f"{name}: only {hits}/20 seeds within 0.05 per coordinate"
        assert elapsed < 30.0, f"sanity runs took {elapsed:.1f}s"


def test_criterion_4_monotone_traces(quad_results):
    with criterion(4, "monotone best-so-far traces"):
        results, _ = quad_results
        for name, runs in results.items():
            for r in runs:
                fits = [f for _, f in r.trace]
                assert all(b >= a for a, b in zip(fits, fits[1:])), f"{name} trace decreased"
                # 50 iterations plus the initial population entry
                assert len(fits) == 51


def test_criterion_5_determinism(tmp_path):
    with criterion(5, "bit-level determinism, including parallel evaluation"):
        scene_path = tmp_path / "scene.pgm"
        save_image(low_contrast_scene(24), scene_path)
        outdir = tmp_path / "rep"

        def snapshot(workers):
            cfg = ExperimentConfig(
                images=[str(scene_path)],
                algorithms=["he", "ga", "de", "soma"],
                runs_per_algorithm=2,
                base_seed=11,
                output_dir=str(outdir),
                workers=workers,
                ga=GaConfig(pop_size=6, iterations=3, elite_count=1),
                de=DeConfig(pop_size=6, iterations=3),
                soma=SomaConfig(pop_size=3, migration_loops=2),
            )
            run_experiment(cfg)
            files = {
                str(p.relative_to(outdir)): p.read_bytes()
                for p in sorted(outdir.rglob("*"))
                if p.suffix in (".pgm", ".csv")
            }
            report = json.loads((outdir / "report.json").read_text())
            for image in report["images"].values():
                for cell in image["algorithms"].values():
                    cell.pop("mean_seconds")
                    cell.pop("std_seconds")
            return files, report

        first = snapshot(workers=0)
        second = snapshot(workers=0)
        third = snapshot(workers=2)
        assert first == second == third


def test_criterion_6_desk_scale_fitness_ordering(desk_experiment):
    with criterion(6, "desk-scale fitness ordering"):
        report, elapsed = desk_experiment
        image = report.images["scene"]
        original_fitness = image.original["fitness"]
        means = {a: image.algorithms[a].mean_fitness for a in ("ga", "de", "soma")}
        he_fitness = image.algorithms["he"].fitness_samples[0]

        for name, mean in means.items():
            assert mean > original_fitness, f"{name} mean {mean} <= original {original_fitness}"
        assert means["soma"] >= means["ga"]
        assert means["soma"] >= means["de"]
        assert he_fitness < max(means.values())
        assert elapsed < 300.0, f"desk protocol took {elapsed:.1f}s"
        print(
            f"\n  original {original_fitness:.2f} | he {he_fitness:.2f} | "
            + " | ".join(f"{a} {means[a]:.2f}" for a in means)
        )


def test_criterion_7_desk_scale_dv_bv_pattern(desk_experiment):
    with criterion(7, "desk-scale detail/background variance pattern"):
        report, _ = desk_experiment
        image = report.images["scene"]
        dv0, bv0 = image.original["dv"], image.original["bv"]
        for name in ("ga", "de", "soma"):
            cell = image.algorithms[name]
            assert cell.dv > dv0, f"{name}: best-run DV {cell.dv} <= original {dv0}"
            assert cell.bv - bv0 < cell.dv - dv0, f"{name}: BV grew more than DV"


def test_criterion_8_rank_test(desk_experiment):
    with criterion(8, "rank test values and desk-scale significance"):
        h, p = kruskal_wallis([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert h == pytest.approx(0.0, abs=1e-12) and p == pytest.approx(1.0, abs=1e-12)

        h, p = kruskal_wallis([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
        assert h == pytest.approx(3.857, abs=1e-3)
        assert p == pytest.approx(0.0495, abs=1e-3)

        report, _ = desk_experiment
        image = report.images["scene"]
        soma = image.algorithms["soma"]
        de = image.algorithms["de"]
        separation = abs(soma.mean_fitness - de.mean_fitness)
        pooled = math.sqrt((soma.std_fitness**2 + de.std_fitness**2) / 2.0)
        p_key = "de_vs_soma" if "de_vs_soma" in image.p_values else "soma_vs_de"
        p_value = image.p_values[p_key]
        triggered = separation > 2.0 * pooled
        if triggered:
            assert p_value < 0.05
        print(
            f"\n  soma-de separation {separation:.3f} vs 2*pooled {2 * pooled:.3f} "
            f"(triggered={triggered}); p={p_value:.2e}"
        )


def test_criterion_9_robustness_ordering_soft(desk_experiment):
    # Soft criterion: reported and flagged, never a hard failure.
    report, _ = desk_experiment
    image = report.images["scene"]
    soma_std = image.algorithms["soma"].std_fitness
    ga_std = image.algorithms["ga"].std_fitness
    verdict = "PASS" if soma_std <= ga_std else "FLAG (soft, not failing)"
    print(
        f"\n[acceptance] criterion 9 (robustness: soma std {soma_std:.3f} "
        f"<= ga std {ga_std:.3f}): {verdict}"
    )
