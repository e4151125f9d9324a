"""Planted two-community graph and two-component feature model."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from src.domain.models import Dataset, LatentLabels, PlantedConfig
from src.infrastructure.utils.rng import make_rng

logger = logging.getLogger(__name__)


def _check_probabilities(p: float, q: float) -> None:
    if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
        raise ValueError(f"Edge probabilities must lie in [0, 1], got p={p}, q={q}")
    if q > p:
        raise ValueError(f"Inter-community probability q={q} exceeds intra-community p={p}")


def make_latent_labels(
    n: int, gamma_target: int, seed: int, permute: bool = True
) -> LatentLabels:
    """Build balanced feature classes z and communities y with |y^T z| close to gamma_target.

    z starts as n/2 ones followed by n/2 minus ones (shuffled when ``permute``).
    y flips the sign of t nodes from each block of z, which keeps both vectors
    balanced and gives |y^T z| = n - 4t.

    Args:
        n: Node count, positive and even.
        gamma_target: Requested alignment in [0, n].
        seed: Root seed.
        permute: Shuffle z before choosing the flipped nodes.

    Returns:
        LatentLabels with the realised alignment.

    Raises:
        ValueError: If n is odd/non-positive or gamma_target is out of range.
    """
    if n <= 0 or n % 2 != 0:
        raise ValueError(f"n must be a positive even integer, got {n}")
    if not 0 <= gamma_target <= n:
        raise ValueError(f"gamma_target must lie in [0, {n}], got {gamma_target}")

    rng = make_rng(seed, "labels")
    z = np.concatenate([np.ones(n // 2, dtype=np.int64), -np.ones(n // 2, dtype=np.int64)])
    if permute:
        z = rng.permutation(z)

    swaps = min(int(math.floor((n - gamma_target) / 4.0 + 0.5)), n // 4)
    y = z.copy()
    if swaps > 0:
        positives = rng.choice(np.flatnonzero(z == 1), size=swaps, replace=False)
        negatives = rng.choice(np.flatnonzero(z == -1), size=swaps, replace=False)
        y[positives] = -1
        y[negatives] = 1

    gamma_actual = abs(int(np.dot(y, z)))
    logger.debug(
        "Latent labels: n=%d gamma_target=%d gamma_actual=%d", n, gamma_target, gamma_actual
    )
    return LatentLabels(z=z, y=y, gamma_actual=gamma_actual)


def sample_mean_vector(d: int, seed: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """Draw the class mean mu uniformly from [low, high)^d."""
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    if high < low:
        raise ValueError(f"Need low <= high, got low={low}, high={high}")
    return make_rng(seed, "mu").uniform(low, high, size=d)


def sample_features(
    labels: LatentLabels, mu: Sequence[float], sigma: float, seed: int
) -> np.ndarray:
    """Sample X = z mu^T + noise with i.i.d. N(0, sigma^2) entries.

    Raises:
        ValueError: If sigma is negative.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    mean = np.outer(labels.z.astype(np.float64), np.asarray(mu, dtype=np.float64))
    if sigma == 0:
        return mean
    noise = make_rng(seed, "features").normal(0.0, sigma, size=mean.shape)
    return mean + noise


def sample_adjacency(labels: LatentLabels, p: float, q: float, seed: int) -> np.ndarray:
    """Sample a symmetric 0/1 adjacency with zero diagonal.

    Entries above the diagonal are Bernoulli(p) inside a community of y and
    Bernoulli(q) across communities; the lower triangle mirrors them.

    Raises:
        ValueError: If a probability is outside [0, 1] or q > p.
    """
    _check_probabilities(p, q)
    y = labels.y
    n = len(y)
    probabilities = np.where(np.equal.outer(y, y), p, q)
    upper = np.triu(make_rng(seed, "adjacency").random((n, n)) < probabilities, k=1)
    return (upper | upper.T).astype(np.float64)


def expected_matrices(
    labels: LatentLabels, mu: Sequence[float], p: float, q: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Population feature matrix z mu^T and expected adjacency.

    The expected adjacency equals (p+q)/2 11^T + (p-q)/2 yy^T - p I, i.e. p inside a
    community, q across, and exactly 0 on the diagonal.

    Returns:
        Tuple of (expected features n x d, expected adjacency n x n).
    """
    _check_probabilities(p, q)
    script_x = np.outer(labels.z.astype(np.float64), np.asarray(mu, dtype=np.float64))
    script_a = np.where(np.equal.outer(labels.y, labels.y), float(p), float(q))
    np.fill_diagonal(script_a, 0.0)
    return script_x, script_a


def sample_train_indices(n: int, m: int, seed: int) -> np.ndarray:
    """Seeded labeled set of size m, sorted ascending."""
    if not 0 <= m <= n:
        raise ValueError(f"Labeled count m must lie in [0, {n}], got {m}")
    chosen = make_rng(seed, "split").choice(n, size=m, replace=False)
    return np.sort(chosen).astype(np.int64)


def generate_dataset(
    planted: PlantedConfig,
    m: int,
    target: str = "z",
    permute: bool = True,
    split_seed: Optional[int] = None,
) -> Dataset:
    """Sample labels, features, adjacency and a labeled split for one planted instance.

    Args:
        planted: Planted model parameters (its seed drives every stream).
        m: Labeled node count.
        target: Which latent vector supplies the binary targets, ``"z"`` or ``"y"``.
        permute: Shuffle z before building y.
        split_seed: Seed for the labeled split; defaults to ``planted.seed``.

    Returns:
        A Dataset carrying the planted configuration.
    """
    labels = make_latent_labels(planted.n, planted.gamma_target, planted.seed, permute=permute)
    features = sample_features(labels, planted.mu, planted.sigma, planted.seed)
    adjacency = sample_adjacency(labels, planted.p, planted.q, planted.seed)
    seed = planted.seed if split_seed is None else split_seed
    train_idx = sample_train_indices(planted.n, m, seed)
    logger.info(
        "Generated planted dataset: n=%d d=%d m=%d edges=%d gamma=%d",
        planted.n,
        planted.d,
        m,
        int(adjacency.sum() // 2),
        labels.gamma_actual,
    )
    return Dataset(
        adjacency=adjacency,
        features=features,
        train_idx=train_idx,
        num_classes=2,
        labels=labels,
        planted=planted,
        target=target,
    )
