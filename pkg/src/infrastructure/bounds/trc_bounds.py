"""Deterministic TRC bounds for vanilla and residual GNN classes."""

import math
from typing import Optional, Tuple

from src.domain.models import BoundInputs

C4 = 5.05
C5 = 0.8


def _labeled_factor(n: int, m: int) -> float:
    if not 0 < m < n:
        raise ValueError(f"Need 0 < m < n, got m={m}, n={n}")
    return n * n / (m * (n - m))


def _trc_terms(inputs: BoundInputs) -> Tuple[float, float]:
    """(n^2/(m(n-m)) * sum_{k<K} r^k, c3 r^K ||SX|| sqrt(ln n)) with r = c2 ||S||_inf."""
    ratio = inputs.c2 * inputs.s_inf
    # 0 ** 0 == 1 keeps the k = 0 summand at one
    geometric = sum(ratio**k for k in range(inputs.K))
    bias_part = _labeled_factor(inputs.n, inputs.m) * geometric
    feature_part = inputs.c3 * ratio**inputs.K * inputs.sx_2inf * math.sqrt(math.log(inputs.n))
    return bias_part, feature_part


def trc_upper(inputs: BoundInputs) -> float:
    """Upper bound on the TRC of K-layer GNNs with ||W_k||_inf <= omega, ||b_k||_1 <= beta."""
    bias_part, feature_part = _trc_terms(inputs)
    return inputs.c1 * bias_part + feature_part


def residual_trc_upper(
    inputs: BoundInputs, alpha: float, x_inf: Optional[float] = None
) -> float:
    """TRC bound of residual GNNs anchored at the first hidden layer.

    Args:
        inputs: Bound inputs of the matching vanilla class.
        alpha: Residual weight in [0, 1]; 0 recovers :func:`trc_upper` exactly.
        x_inf: ||X||_inf, defaults to ``inputs.x_inf``.

    Raises:
        ValueError: If alpha is outside [0, 1].
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    x_inf = inputs.x_inf if x_inf is None else x_inf
    if x_inf < 0:
        raise ValueError(f"x_inf must be non-negative, got {x_inf}")
    bias_part, feature_part = _trc_terms(inputs)
    skip = 2.0 * inputs.lipschitz * x_inf
    keep = 1.0 - alpha
    bias_weight = keep * inputs.c1 + alpha * skip
    return bias_weight * (keep * bias_part) + alpha * skip + keep * feature_part


def gen_gap_slack(n: int, m: int, delta: float) -> Tuple[float, float]:
    """(c4 n sqrt(min{m, n-m}) / (m(n-m)), c5 sqrt(n/(m(n-m)) ln(1/delta)))."""
    if not 0 < m < n:
        raise ValueError(f"Need 0 < m < n, got m={m}, n={n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    labeled = m * (n - m)
    c4_term = C4 * n * math.sqrt(min(m, n - m)) / labeled
    c5_term = C5 * math.sqrt(n / labeled * math.log(1.0 / delta))
    return c4_term, c5_term
