"""Bounds that hold in expectation over the planted graph and features.

The TRC formulas in :func:`expected_trc_sbm` are evaluated exactly as stated for the
two diffusion kinds. :func:`expected_norm_table` keeps the per-term concentration
values, whose degree-normalized entries differ from the theorem in two places
(a squared vs. unsquared (p+q)/2 denominator and sqrt(sigma) vs. sigma). Both
forms are kept side by side on purpose; neither is rewritten into the other.
"""

import logging
import math
from typing import Union

from src.domain.kinds import DiffusionKind, NormTableRow
from src.domain.models import DiffusionComparison, ExpectedTrcConfig

logger = logging.getLogger(__name__)


def _alignment_factor(p: float, q: float, gamma: float) -> float:
    return 1.0 + ((p - q) / 2.0) ** 2 * gamma**2


def _check_graph_kind(kind: DiffusionKind, q: float) -> None:
    if kind == DiffusionKind.IDENTITY:
        raise ValueError("Expected planted bounds are defined for self_loop and degree_normalized")
    if kind == DiffusionKind.DEGREE_NORMALIZED and q <= 0:
        raise ValueError(f"degree_normalized bounds divide by q; got q={q}")


def _warn_regime(config: ExpectedTrcConfig) -> None:
    if config.regime_warning:
        logger.warning(
            "p=%s or q=%s is not above (ln n)^2/n=%.4f; expected bounds are outside their regime",
            config.p,
            config.q,
            math.log(config.n) ** 2 / config.n,
        )


def expected_trc_sbm(
    config: ExpectedTrcConfig, kind: Union[DiffusionKind, str], m: int
) -> float:
    """Expected TRC bound of K-layer GNNs on the planted model.

    Args:
        config: Planted view with parameter norms and correction constants.
        kind: ``self_loop`` or ``degree_normalized``.
        m: Labeled node count, 0 < m < n.

    Returns:
        The bound value (natural logarithms throughout).

    Raises:
        ValueError: For the identity kind, q = 0 with degree normalization, or m out of range.
    """
    kind = DiffusionKind(kind)
    _check_graph_kind(kind, config.q)
    n, p, q = config.n, config.p, config.q
    if not 0 < m < n:
        raise ValueError(f"Need 0 < m < n, got m={m}, n={n}")
    _warn_regime(config)

    c1 = 2.0 * config.lipschitz * config.beta
    c2 = 2.0 * config.lipschitz * config.omega
    c3 = config.lipschitz * config.omega * math.sqrt(2.0 / config.d)
    mu_inf, sigma, log_n = config.mu_inf, config.sigma, math.log(n)
    alignment = _alignment_factor(p, q, config.gamma)

    if kind == DiffusionKind.DEGREE_NORMALIZED:
        growth = math.sqrt(p / q)
        columns = (
            config.c6 * mu_inf * alignment / ((p + q) / 2.0) ** 2
            + config.c6 * math.sqrt(log_n / q) * mu_inf
            + config.c6 * math.sqrt(sigma * (1.0 + 2.0 * math.log(config.d)) / q)
        )
    else:
        growth = n * p
        columns = (
            config.c6 * mu_inf * n * alignment
            + n * math.sqrt((p + q) / 2.0) * mu_inf
            + config.c6 * n * math.sqrt(p) * sigma * math.sqrt(1.0 + 2.0 * math.log(config.d))
        )

    geometric = sum(config.c7 * c2**k * growth**k for k in range(config.K))
    bias_part = c1 * n * n / (m * (n - m)) * geometric
    feature_part = config.c8 * c3 * c2**config.K * growth**config.K * math.sqrt(log_n) * columns
    return bias_part + feature_part


def deterministic_sx_norm(
    n: int, p: float, q: float, gamma: float, mu_inf: float, as_printed: bool = False
) -> float:
    """||(A_exp + I) X_exp||_{2->inf} for balanced z and y.

    The exact value carries ``+ (p-q)(1-p) Gamma^2`` under the square root; with
    ``as_printed`` the minus-sign variant is evaluated instead.

    Raises:
        ValueError: If the radicand is negative.
    """
    sign = -1.0 if as_printed else 1.0
    radicand = (
        n * (1.0 - p) ** 2
        + 0.25 * n * (p - q) ** 2 * gamma**2
        + sign * (p - q) * (1.0 - p) * gamma**2
    )
    if radicand < 0:
        raise ValueError(
            f"Negative radicand {radicand:.6g} for n={n}, p={p}, q={q}, gamma={gamma}"
        )
    return mu_inf * math.sqrt(radicand)


def table_moment(row: Union[NormTableRow, str], kind: Union[DiffusionKind, str]) -> int:
    """Moment order of a table entry: 0 deterministic, 1 for E[norm], 2 for E[norm^2]."""
    row, kind = NormTableRow(row), DiffusionKind(kind)
    if row == NormTableRow.SX_DET:
        return 0
    if row == NormTableRow.SMS_X:
        return 1 if kind == DiffusionKind.SELF_LOOP else 2
    if row == NormTableRow.XMX_S:
        return 2
    return 1


def expected_norm_table(
    row: Union[NormTableRow, str],
    kind: Union[DiffusionKind, str],
    params: ExpectedTrcConfig,
    k: int = 1,
) -> float:
    """Concentration value of one table entry (constant C = 1).

    Rows: ``sx_det`` deterministic ||S_exp X_exp||, ``sms_x`` the graph noise term
    ||(S - S_exp) X_exp||, ``xmx_s`` the feature noise term ||S (X - X_exp)||, and
    ``s_inf_pow`` E||S||_inf^k. See :func:`table_moment` for each moment order.

    Raises:
        ValueError: For an invalid row/kind combination, q = 0 with degree
            normalization, or k < 1 for ``s_inf_pow``.
    """
    row, kind = NormTableRow(row), DiffusionKind(kind)
    _check_graph_kind(kind, params.q)
    n, p, q = params.n, params.p, params.q
    mu_inf, sigma = params.mu_inf, params.sigma
    self_loop = kind == DiffusionKind.SELF_LOOP

    if row == NormTableRow.SX_DET:
        alignment = _alignment_factor(p, q, params.gamma)
        return mu_inf * n * alignment if self_loop else mu_inf * alignment / ((p + q) / 2.0)
    if row == NormTableRow.SMS_X:
        if self_loop:
            return n * math.sqrt((p + q) / 2.0) * mu_inf
        return n * math.log(n) / (1.0 + (n - 1) * q) * mu_inf
    if row == NormTableRow.XMX_S:
        spread = sigma**2 * (1.0 + 2.0 * math.log(params.d))
        return n * n * p * spread if self_loop else spread / q
    if k < 1:
        raise ValueError(f"k must be at least 1 for s_inf_pow, got {k}")
    return (n * p) ** k if self_loop else (p / q) ** (k / 2.0)


def expected_sx_decomposition(
    params: ExpectedTrcConfig, kind: Union[DiffusionKind, str], k: int
) -> float:
    """Bound on E[||S||_inf^k ||SX||_{2->inf}] assembled from the table entries.

    det * E||S||^k + sqrt(E||S||^{2k}) * (graph noise + feature noise), where second
    moment entries enter through their square root.
    """
    kind = DiffusionKind(kind)

    def _as_norm(row: NormTableRow) -> float:
        value = expected_norm_table(row, kind, params)
        return math.sqrt(value) if table_moment(row, kind) == 2 else value

    deterministic = expected_norm_table(NormTableRow.SX_DET, kind, params)
    power = expected_norm_table(NormTableRow.S_INF_POW, kind, params, k)
    double_power = expected_norm_table(NormTableRow.S_INF_POW, kind, params, 2 * k)
    noise = _as_norm(NormTableRow.SMS_X) + _as_norm(NormTableRow.XMX_S)
    return deterministic * power + math.sqrt(double_power) * noise


def compare_diffusion_bounds(config: ExpectedTrcConfig, m: int, K: int) -> DiffusionComparison:
    """Deterministic-case TRC bound with S = I against the population S_nor.

    In the deterministic case every node of the expected graph has degree
    (n/2 - 1) p + (n/2) q, so S_nor = (A_exp + I) / (degree + 1) has unit inf-norm
    and ||S_nor X_exp|| = deterministic_sx_norm / (degree + 1). With S = I the
    column term is ||X_exp||_{2->inf} = ||mu||_inf sqrt(n).

    The threshold n / sqrt(n rho + n), rho = (p+q)/2, is reported as an annotation only.
    """
    n, p, q = config.n, config.p, config.q
    if not 0 < m < n:
        raise ValueError(f"Need 0 < m < n, got m={m}, n={n}")
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")

    c1 = 2.0 * config.lipschitz * config.beta
    c2 = 2.0 * config.lipschitz * config.omega
    c3 = config.lipschitz * config.omega * math.sqrt(2.0 / config.d)
    bias_part = c1 * n * n / (m * (n - m)) * sum(c2**k for k in range(K))
    scale = c3 * c2**K * math.sqrt(math.log(n))

    identity_column = config.mu_inf * math.sqrt(n)
    degree_plus_one = (n / 2.0 - 1.0) * p + (n / 2.0) * q + 1.0
    normalized_column = (
        deterministic_sx_norm(n, p, q, config.gamma, config.mu_inf) / degree_plus_one
    )

    identity_bound = bias_part + scale * identity_column
    normalized_bound = bias_part + scale * normalized_column
    rho = (p + q) / 2.0
    return DiffusionComparison(
        identity_bound=identity_bound,
        normalized_bound=normalized_bound,
        graph_helps=normalized_bound < identity_bound,
        threshold_annotation=n / math.sqrt(n * rho + n),
    )
