"""Monte Carlo estimates of transductive Rademacher complexities.

Sign vectors take +1 and -1 with probability ``p_sigma`` each and 0 otherwise. A class
is represented by the output vectors of finitely many sampled hypotheses, so the
estimate of Q * E[sup sigma^T v] is a lower estimate of the complexity of the full class.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from src.domain.models import DiffusionOperator, FiniteSetCheck, GnnConfig, GnnModel, TrcEstimate
from src.infrastructure.gnn.engine import forward_cache
from src.infrastructure.graph.graph_ops import inf_norm
from src.infrastructure.utils.rng import make_rng

logger = logging.getLogger(__name__)

SIGMA_BLOCK_SIZE = 256


@dataclass(frozen=True)
class SigmaSampler:
    """Three-point sign law on n coordinates."""

    n: int
    p_sigma: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0.0 <= self.p_sigma <= 0.5:
            raise ValueError(f"p_sigma must lie in [0, 0.5], got {self.p_sigma}")


def transductive_q(m: int, n: int) -> float:
    """Q = 1/m + 1/(n - m)."""
    if not 0 < m < n:
        raise ValueError(f"Need 0 < m < n, got m={m}, n={n}")
    return 1.0 / m + 1.0 / (n - m)


def default_p_sigma(m: int, n: int) -> float:
    return m * (n - m) / float(n * n)


def sample_sigma_block(sampler: SigmaSampler, block_index: int, count: int) -> np.ndarray:
    """``count`` independent sign vectors from the stream of one block."""
    u = make_rng(sampler.seed, "sigma", block_index).random((count, sampler.n))
    p = sampler.p_sigma
    return np.where(u < p, 1.0, np.where(u < 2.0 * p, -1.0, 0.0))


def sample_sigma(sampler: SigmaSampler, draw_index: int = 0) -> np.ndarray:
    """One sign vector in {-1, 0, +1}^n."""
    return sample_sigma_block(sampler, draw_index, 1)[0]


def per_draw_sups(outputs: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """max_h sigma^T v_h for every sign vector.

    Args:
        outputs: (H, n) output vectors of the hypotheses.
        sigmas: (B, n) sign vectors.

    Returns:
        Array of B per-draw suprema.
    """
    outputs = np.atleast_2d(outputs)
    return np.max(sigmas @ outputs.T, axis=1)


def estimate_from_outputs(
    outputs: np.ndarray,
    m: int,
    n: int,
    p_sigma: Optional[float] = None,
    num_sigma: int = 1000,
    seed: int = 0,
    jobs: int = 1,
) -> TrcEstimate:
    """Q * mean over sign draws of the per-draw supremum, with its standard error.

    Draws are grouped in fixed blocks with their own seed streams, so the result
    does not depend on ``jobs``.
    """
    outputs = np.atleast_2d(np.asarray(outputs, dtype=np.float64))
    if outputs.shape[1] != n:
        raise ValueError(f"Output vectors have length {outputs.shape[1]}, expected n={n}")
    if num_sigma < 1:
        raise ValueError(f"num_sigma must be positive, got {num_sigma}")
    q_factor = transductive_q(m, n)
    p_sigma = default_p_sigma(m, n) if p_sigma is None else p_sigma
    sampler = SigmaSampler(n=n, p_sigma=p_sigma, seed=seed)

    num_blocks = math.ceil(num_sigma / SIGMA_BLOCK_SIZE)

    def _run_block(block_index: int) -> np.ndarray:
        count = min(SIGMA_BLOCK_SIZE, num_sigma - block_index * SIGMA_BLOCK_SIZE)
        return per_draw_sups(outputs, sample_sigma_block(sampler, block_index, count))

    results: Dict[int, np.ndarray] = {}
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        futures = {executor.submit(_run_block, b): b for b in range(num_blocks)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    values = q_factor * np.concatenate([results[b] for b in range(num_blocks)])

    standard_error = 0.0
    if len(values) > 1:
        standard_error = float(values.std(ddof=1) / math.sqrt(len(values)))
    return TrcEstimate(
        mean=float(values.mean()),
        standard_error=standard_error,
        num_sigma_draws=num_sigma,
        num_hypothesis_samples=outputs.shape[0],
        p_sigma=p_sigma,
    )


def _rescale(array: np.ndarray, current: float, target: float) -> np.ndarray:
    if current == 0:
        return np.zeros_like(array)
    return array * (target / current)


def sample_bounded_model(
    config: GnnConfig, omega: float, beta: float, seed: int, index: int
) -> GnnModel:
    """Uniform draw rescaled so that ||W_k||_inf = omega and ||b_k||_1 = beta for every k."""
    rng = make_rng(seed, "hypothesis", index)
    dims = config.layer_dims
    weights, biases = [], []
    for k in range(config.num_layers):
        weight = rng.uniform(-1.0, 1.0, size=(dims[k], dims[k + 1]))
        bias = rng.uniform(-1.0, 1.0, size=dims[k + 1])
        weights.append(_rescale(weight, inf_norm(weight), omega))
        biases.append(_rescale(bias, float(np.abs(bias).sum()), beta))
    return GnnModel(weights=weights, biases=biases, config=config)


def empirical_trc_lower(
    diffusion: DiffusionOperator,
    features: np.ndarray,
    omega: float,
    beta: float,
    config: GnnConfig,
    num_sigma: int,
    num_models: int,
    seed: int,
    m: int,
    p_sigma: Optional[float] = None,
    jobs: int = 1,
) -> TrcEstimate:
    """Lower estimate of the TRC of the (omega, beta)-restricted GNN class.

    Args:
        diffusion: Diffusion operator S.
        features: Node features X.
        omega: Weight inf-norm radius.
        beta: Bias 1-norm radius.
        config: Architecture; must have a scalar output.
        num_sigma: Number of sign draws.
        num_models: Number of hypotheses sampled on the norm-ball boundary.
        seed: Seed of the hypothesis and sign streams.
        m: Labeled node count used in Q and the default p_sigma.
        p_sigma: Sign probability (defaults to m(n-m)/n^2).
        jobs: Worker threads for the sign draws.

    Raises:
        ValueError: If the output dimension is not 1 or num_models < 1.
    """
    if config.output_dim != 1:
        raise ValueError(f"TRC estimation needs a scalar output, got width {config.output_dim}")
    if num_models < 1:
        raise ValueError(f"num_models must be positive, got {num_models}")
    outputs = np.stack(
        [
            forward_cache(
                sample_bounded_model(config, omega, beta, seed, j), diffusion, features
            ).output[:, 0]
            for j in range(num_models)
        ]
    )
    estimate = estimate_from_outputs(
        outputs,
        m=m,
        n=features.shape[0],
        p_sigma=p_sigma,
        num_sigma=num_sigma,
        seed=seed,
        jobs=jobs,
    )
    logger.debug(
        "TRC lower estimate %.6f +- %.6f over %d models",
        estimate.mean,
        estimate.standard_error,
        num_models,
    )
    return estimate


def finite_set_rademacher_check(
    vectors: np.ndarray,
    m: int,
    n: int,
    p_sigma: Optional[float] = None,
    num_sigma: int = 2000,
    seed: int = 0,
) -> FiniteSetCheck:
    """Compare the empirical TRC of a finite set with max ||a - mean|| sqrt(2 ln|A| / dim).

    The ratio empirical / bound is 0 when both vanish and inf when only the bound does.
    A ratio above 1 is logged, never raised.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if vectors.shape[0] == 0:
        raise ValueError("finite_set_rademacher_check needs a non-empty set")
    empirical = estimate_from_outputs(
        vectors, m=m, n=n, p_sigma=p_sigma, num_sigma=num_sigma, seed=seed
    ).mean
    centred = vectors - vectors.mean(axis=0)
    radius = float(np.max(np.linalg.norm(centred, axis=1)))
    lemma_bound = radius * math.sqrt(2.0 * math.log(vectors.shape[0]) / vectors.shape[1])

    if lemma_bound > 0:
        ratio = empirical / lemma_bound
    else:
        ratio = 0.0 if empirical == 0 else math.inf
    if ratio > 1.0:
        logger.warning(
            "Finite-set check: empirical %.6f exceeds lemma bound %.6f (ratio %.3f)",
            empirical,
            lemma_bound,
            ratio,
        )
    return FiniteSetCheck(empirical_value=empirical, lemma_bound=lemma_bound, ratio=ratio)
