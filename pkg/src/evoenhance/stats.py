"""Two-sample Kruskal-Wallis rank test with midrank tie handling."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["kruskal_wallis"]


def _midranks(values: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """1-based ranks, ties receiving the mean of the ranks they span."""
    order = np.argsort(values, kind="mergesort")
    sorted_vals = values[order]
    ranks = np.empty(values.size, dtype=np.float64)
    tie_sizes = []
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def kruskal_wallis(sample_a, sample_b) -> tuple[float, float]:
    """H statistic (tie-corrected) and its chi-square p-value with 1 dof.

    Rank-based, so the result is symmetric in the samples and invariant
    under any strictly monotone transform applied to both. If every value
    is tied the statistic is 0 and p is 1.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each sample needs at least 2 values")
    combined = np.concatenate([a, b])
    n = combined.size
    ranks, tie_sizes = _midranks(combined)
    ra = float(ranks[: a.size].sum())
    rb = float(ranks[a.size :].sum())
    h = 12.0 / (n * (n + 1)) * (ra * ra / a.size + rb * rb / b.size) - 3.0 * (n + 1)
    correction = 1.0 - sum(t**3 - t for t in tie_sizes) / (n**3 - n)
    if correction <= 0.0:
        return 0.0, 1.0
    h = max(h / correction, 0.0)
    # chi-square survival function with one degree of freedom
    p = math.erfc(math.sqrt(h / 2.0))
    return h, p
