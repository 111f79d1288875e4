"""Replicate statistics: the paired signed-rank test (exact for small
samples, normal approximation with tie correction above) and the median/IQR
summary convention used in the result tables."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["wilcoxon_signed_rank", "median_iqr"]

_EXACT_LIMIT = 12


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def wilcoxon_signed_rank(a, b, method: str = "auto") -> float:
    """Two-sided paired signed-rank p-value.

    Zero differences are dropped.  With method='auto', up to 12 effective
    pairs the p-value is computed by enumerating all sign patterns exactly;
    beyond that a normal approximation with tie correction and continuity
    correction is used.  'exact' and 'approx' force one route.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("paired samples differ in length")
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    diff = a - b
    diff = diff[diff != 0.0]
    n = len(diff)
    if n == 0:
        return 1.0
    if n < 5:
        raise ValueError(f"only {n} nonzero differences; need at least 5")
    ranks = _average_ranks(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    mean = n * (n + 1) / 4.0
    deviation = abs(w_plus - mean)
    if method == "exact" or (method == "auto" and n <= _EXACT_LIMIT):
        # all 2^n sign patterns, vectorized over a bit matrix
        masks = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
        sums = masks @ ranks
        count = int(np.sum(np.abs(sums - mean) >= deviation - 1e-9))
        return count / (1 << n)
    # tie-corrected variance
    _, tie_counts = np.unique(np.abs(diff), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts**3 - tie_counts) / 48.0
    if var <= 0:
        return 1.0
    z = max(deviation - 0.5, 0.0) / math.sqrt(var)
    return math.erfc(z / math.sqrt(2.0))


def median_iqr(values) -> tuple[float, float]:
    """Median and interquartile range (Q3 - Q1, linear interpolation)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no values to summarize")
    q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
    return float(med), float(q3 - q1)
