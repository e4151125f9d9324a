"""VC dimension of GNN classes and the resulting gap bound."""

import math
from typing import Sequence, Union

from src.domain.kinds import VcKind


def vc_dimension(
    kind: Union[VcKind, str], d: int, rank_s: int, hidden_dims: Sequence[int]
) -> int:
    """VC dimension (LINEAR) or its upper bound (RELU_UPPER).

    With no hidden layers the LINEAR value is min{d, rank(S)} and the RELU_UPPER
    value falls back to min{rank(S), d_0} = min{rank(S), d}.

    Args:
        kind: ``linear`` or ``relu_upper``.
        d: Input feature dimension.
        rank_s: Rank of the diffusion operator.
        hidden_dims: Widths d_1..d_{K-1}.

    Returns:
        The capacity value.
    """
    kind = VcKind(kind)
    if rank_s < 0 or d < 0:
        raise ValueError(f"rank_s and d must be non-negative, got rank_s={rank_s}, d={d}")
    hidden = list(hidden_dims)
    if kind == VcKind.LINEAR:
        return int(min([d, rank_s] + hidden))
    last_width = hidden[-1] if hidden else d
    return int(min(rank_s, last_width))


def is_upper_bound(kind: Union[VcKind, str]) -> bool:
    return VcKind(kind) == VcKind.RELU_UPPER


def vc_gap_bound(m: int, cap: int, delta: float) -> float:
    """sqrt(8/m * (cap * ln(e m) + ln(4 / delta)))."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if cap < 0:
        raise ValueError(f"cap must be non-negative, got {cap}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.sqrt(8.0 / m * (cap * math.log(math.e * m) + math.log(4.0 / delta)))
