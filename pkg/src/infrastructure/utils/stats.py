"""Rank statistics for sweep trends."""

from typing import Sequence

import numpy as np
from scipy import stats


def trend_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (average ranks for ties).

    Returns NaN when either sequence is constant.

    Raises:
        ValueError: If the lengths differ or fewer than two points are given.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape:
        raise ValueError(f"Length mismatch: {xs.shape[0]} vs {ys.shape[0]}")
    if xs.shape[0] < 2:
        raise ValueError(f"trend_correlation needs at least two points, got {xs.shape[0]}")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        return float("nan")
    rho, _ = stats.spearmanr(xs, ys)
    return float(np.clip(rho, -1.0, 1.0))
